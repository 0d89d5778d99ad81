#include <cvqrc/reservoir.hpp>

#include <cmath>
#include <stdexcept>

namespace cvqrc {

OmegaRule OmegaRule::constant_rule(double v) {
  OmegaRule r;
  r.kind = Kind::constant;
  r.value = v;
  return r;
}

OmegaRule OmegaRule::per_mode_rule(std::vector<double> v) {
  OmegaRule r;
  r.kind = Kind::per_mode;
  r.values = std::move(v);
  return r;
}

OmegaRule OmegaRule::random_range_rule(double lo, double hi) {
  OmegaRule r;
  r.kind = Kind::random_range;
  r.range = {lo, hi};
  return r;
}

namespace {

void check_interval(const Interval& iv, const char* what) {
  if (!(iv.lo <= iv.hi)) {
    throw std::invalid_argument(std::string("init_reservoir: ill-ordered range for ") + what);
  }
}

RealVector draw_omegas(const OmegaRule& rule, Eigen::Index n, RngStream& rng) {
  RealVector w(n);
  switch (rule.kind) {
    case OmegaRule::Kind::constant:
      w.setConstant(rule.value);
      break;
    case OmegaRule::Kind::per_mode:
      if (static_cast<Eigen::Index>(rule.values.size()) != n) {
        throw std::invalid_argument("init_reservoir: per-mode frequency list length mismatch");
      }
      for (Eigen::Index j = 0; j < n; ++j) w(j) = rule.values[static_cast<std::size_t>(j)];
      break;
    case OmegaRule::Kind::random_range:
      check_interval(rule.range, "omega");
      for (Eigen::Index j = 0; j < n; ++j) {
        w(j) = rule.range.lo == rule.range.hi ? rule.range.lo
                                              : rng.uniform(rule.range.lo, rule.range.hi);
      }
      break;
  }
  if ((w.array() <= 0.0).any()) {
    throw std::invalid_argument("init_reservoir: frequencies must be positive");
  }
  return w;
}

RealMatrix draw_coupling(const Interval& range, Eigen::Index n, RngStream& rng) {
  RealMatrix c = RealMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double v = range.lo == range.hi ? range.lo : rng.uniform(range.lo, range.hi);
      c(j, k) = v;
      c(k, j) = v;
    }
  }
  return c;
}

double spectral_radius(const RealMatrix& a) {
  Eigen::EigenSolver<RealMatrix> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// The reservoir block evolves as sigma_R -> R * S1 sigma_R S1^T + input terms,
// so sqrt(R) * S1 contracting makes the state forget its initial condition.
constexpr double kStabilityMargin = 0.97;
constexpr int kMaxDraws = 1000;

}  // namespace

ReservoirInstance init_reservoir(const ReservoirConfig& config, RngStream& rng) {
  if (config.n_modes < 1) throw std::invalid_argument("init_reservoir: need n_modes >= 1");
  if (config.reflectivity < 0.0 || config.reflectivity > 1.0) {
    throw std::invalid_argument("init_reservoir: reflectivity must lie in [0,1]");
  }
  if (!(config.dt > 0.0)) throw std::invalid_argument("init_reservoir: dt must be positive");
  check_interval(config.g_range, "g");
  check_interval(config.h_range, "h");

  ReservoirInstance inst;
  inst.config = config;
  const double feedback_gain = std::sqrt(config.reflectivity);
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kMaxDraws) {
      throw std::runtime_error(
          "init_reservoir: no echo-stable draw within 1000 attempts; "
          "widen the frequency range or reduce dt");
    }
    inst.omegas = draw_omegas(config.omega, config.n_modes, rng);
    inst.g1 = draw_coupling(config.g_range, config.n_modes, rng);
    inst.h1 = draw_coupling(config.h_range, config.n_modes, rng);
    inst.g2 = draw_coupling(config.g_range, config.n_modes, rng);
    inst.h2 = draw_coupling(config.h_range, config.n_modes, rng);

    const SymplecticMatrix s1 =
        propagator(hamiltonian_matrix({inst.omegas, inst.g1, inst.h1}), config.dt);
    if (feedback_gain * spectral_radius(s1) > kStabilityMargin) continue;
    const SymplecticMatrix s2 =
        propagator(hamiltonian_matrix({inst.omegas, inst.g2, inst.h2}), config.dt);
    inst.s_step = step_symplectic(s1, s2, config.reflectivity);
    return inst;
  }
}

ReservoirState initial_state(Eigen::Index n_modes) {
  return {CovarianceMatrix::unchecked(RealMatrix::Identity(2 * n_modes, 2 * n_modes)), 0};
}

CovarianceMatrix encode_input(double s, Eigen::Index n_modes) {
  if (s < -1.0 || s > 1.0) {
    throw std::invalid_argument("encode_input: input must lie in [-1,1]");
  }
  const RealMatrix one = squeezed_vacuum_cov((s + 1.0) / 2.0).matrix();
  RealMatrix m = RealMatrix::Zero(2 * n_modes, 2 * n_modes);
  for (Eigen::Index j = 0; j < n_modes; ++j) m.block<2, 2>(2 * j, 2 * j) = one;
  return CovarianceMatrix::unchecked(std::move(m));
}

std::pair<ReservoirState, StepRecord> step(const ReservoirInstance& instance,
                                           const ReservoirState& state,
                                           const CovarianceMatrix& sigma_in) {
  const Eigen::Index d = 2 * instance.config.n_modes;
  if (state.sigma_r.matrix().rows() != d || sigma_in.matrix().rows() != d) {
    throw std::invalid_argument("step: dimension mismatch");
  }
  // Reservoir (+) input with no cross correlations, conjugated by the step
  // operator; top-left block feeds back, bottom-right is measured.
  RealMatrix joint = RealMatrix::Zero(2 * d, 2 * d);
  joint.topLeftCorner(d, d) = state.sigma_r.matrix();
  joint.bottomRightCorner(d, d) = sigma_in.matrix();
  joint = instance.s_step * joint * instance.s_step.transpose();
  ReservoirState next{CovarianceMatrix::unchecked(joint.topLeftCorner(d, d)),
                      state.step_index + 1};
  StepRecord rec{state.step_index, CovarianceMatrix::unchecked(joint.bottomRightCorner(d, d))};
  return {std::move(next), std::move(rec)};
}

std::vector<StepRecord> run_trajectory(const ReservoirInstance& instance,
                                       const std::vector<double>& inputs,
                                       const ReservoirState& initial) {
  if (inputs.empty()) throw std::invalid_argument("run_trajectory: inputs must be nonempty");
  std::vector<StepRecord> records;
  records.reserve(inputs.size());
  ReservoirState state = initial;
  const Eigen::Index n = instance.config.n_modes;
  for (double s : inputs) {
    auto [next, rec] = step(instance, state, encode_input(s, n));
    records.push_back(std::move(rec));
    state = std::move(next);
  }
  return records;
}

}  // namespace cvqrc
