#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <cvqrc/gaussian.hpp>
#include <cvqrc/reservoir.hpp>
#include <cvqrc/rng.hpp>

using namespace cvqrc;

namespace {

ReservoirConfig small_config() {
  ReservoirConfig cfg;
  cfg.n_modes = 3;
  return cfg;
}

}  // namespace

TEST_CASE("omega rules") {
  RngStream rng(11);

  SUBCASE("constant fills every mode") {
    ReservoirConfig cfg = small_config();
    cfg.omega = OmegaRule::constant_rule(0.8);
    const ReservoirInstance inst = init_reservoir(cfg, rng);
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(inst.omegas(j) == 0.8);
  }

  SUBCASE("per-mode list is taken verbatim") {
    ReservoirConfig cfg = small_config();
    cfg.omega = OmegaRule::per_mode_rule({0.7, 1.1, 1.4});
    const ReservoirInstance inst = init_reservoir(cfg, rng);
    CHECK(inst.omegas(0) == 0.7);
    CHECK(inst.omegas(1) == 1.1);
    CHECK(inst.omegas(2) == 1.4);
  }

  SUBCASE("per-mode list of the wrong length throws") {
    ReservoirConfig cfg = small_config();
    cfg.omega = OmegaRule::per_mode_rule({0.7, 1.1});
    CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
  }

  SUBCASE("random range stays inside its interval") {
    ReservoirConfig cfg = small_config();
    cfg.omega = OmegaRule::random_range_rule(0.5, 1.5);
    for (int rep = 0; rep < 20; ++rep) {
      const ReservoirInstance inst = init_reservoir(cfg, rng);
      for (Eigen::Index j = 0; j < 3; ++j) {
        CHECK(inst.omegas(j) >= 0.5);
        CHECK(inst.omegas(j) <= 1.5);
      }
    }
  }

  SUBCASE("nonpositive frequencies are rejected") {
    ReservoirConfig cfg = small_config();
    cfg.omega = OmegaRule::constant_rule(0.0);
    CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
    cfg.omega = OmegaRule::per_mode_rule({0.7, -0.2, 1.4});
    CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
  }
}

TEST_CASE("coupling draws: range, symmetry, zero diagonal") {
  ReservoirConfig cfg;
  cfg.n_modes = 7;
  RngStream rng(5);
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  for (const RealMatrix* c : {&inst.g1, &inst.g2}) {
    CHECK((*c - c->transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(c->diagonal().cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index j = 0; j < 7; ++j)
      for (Eigen::Index k = j + 1; k < 7; ++k) {
        CHECK((*c)(j, k) >= 0.1);
        CHECK((*c)(j, k) <= 0.3);
      }
  }
  for (const RealMatrix* c : {&inst.h1, &inst.h2}) {
    for (Eigen::Index j = 0; j < 7; ++j)
      for (Eigen::Index k = j + 1; k < 7; ++k) {
        CHECK((*c)(j, k) >= 0.2);
        CHECK((*c)(j, k) <= 0.4);
      }
  }
  // Distinct draws for the two crystals.
  CHECK((inst.g1 - inst.g2).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("instance step operator is symplectic and sized 4N x 4N") {
  ReservoirConfig cfg;
  RngStream rng(17);
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  CHECK(inst.s_step.rows() == 28);
  CHECK(inst.s_step.cols() == 28);
  CHECK(symplectic_defect(inst.s_step) <= 1e-10);
}

TEST_CASE("init_reservoir is deterministic in the stream seed") {
  ReservoirConfig cfg;
  RngStream a(123), b(123), c(124);
  const ReservoirInstance ia = init_reservoir(cfg, a);
  const ReservoirInstance ib = init_reservoir(cfg, b);
  const ReservoirInstance ic = init_reservoir(cfg, c);
  CHECK((ia.s_step - ib.s_step).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ia.omegas - ib.omegas).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ia.s_step - ic.s_step).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("accepted draws make sqrt(R) * S1 a strict contraction") {
  ReservoirConfig cfg;
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    RngStream rng(seed);
    const ReservoirInstance inst = init_reservoir(cfg, rng);
    const SymplecticMatrix s1 =
        propagator(hamiltonian_matrix({inst.omegas, inst.g1, inst.h1}), cfg.dt);
    Eigen::EigenSolver<RealMatrix> es(std::sqrt(cfg.reflectivity) * s1, false);
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= 0.97 + 1e-12);
  }
}

TEST_CASE("configurations with no stable draw throw after the retry cap") {
  // R = 1 leaves the reservoir register unitary, so sqrt(R) * S1 has spectral
  // radius >= 1 for every draw and rejection can never terminate.
  ReservoirConfig cfg = small_config();
  cfg.reflectivity = 1.0;
  RngStream rng(3);
  CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::runtime_error);
}

TEST_CASE("config validation") {
  RngStream rng(1);
  ReservoirConfig cfg = small_config();
  cfg.n_modes = 0;
  CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
  cfg = small_config();
  cfg.reflectivity = 1.2;
  CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
  cfg = small_config();
  cfg.dt = 0.0;
  CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
  cfg = small_config();
  cfg.g_range = {0.3, 0.1};
  CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
  cfg = small_config();
  cfg.omega = OmegaRule::random_range_rule(1.5, 0.5);
  CHECK_THROWS_AS((void)init_reservoir(cfg, rng), std::invalid_argument);
}

TEST_CASE("encode_input covariance and bounds") {
  const CovarianceMatrix sigma = encode_input(0.5, 2);
  // r = (0.5 + 1) / 2 = 0.75 on every mode, diag(e^{2r}, e^{-2r}).
  const double e = std::exp(1.5);
  CHECK(sigma.matrix()(0, 0) == doctest::Approx(e).epsilon(1e-12));
  CHECK(sigma.matrix()(1, 1) == doctest::Approx(1.0 / e).epsilon(1e-12));
  CHECK(sigma.matrix()(2, 2) == doctest::Approx(e).epsilon(1e-12));
  CHECK(sigma.matrix()(3, 3) == doctest::Approx(1.0 / e).epsilon(1e-12));
  CHECK(sigma.matrix().cwiseAbs().sum() ==
        doctest::Approx(2.0 * (e + 1.0 / e)).epsilon(1e-12));

  // s = -1 encodes vacuum.
  CHECK((encode_input(-1.0, 2).matrix() - RealMatrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);

  CHECK_THROWS_AS((void)encode_input(1.0001, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)encode_input(-1.0001, 2), std::invalid_argument);
}

TEST_CASE("step bookkeeping and output register") {
  ReservoirConfig cfg = small_config();
  RngStream rng(7);
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  const ReservoirState s0 = initial_state(cfg.n_modes);
  CHECK(s0.step_index == 0);
  CHECK((s0.sigma_r.matrix() - RealMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);

  const auto [s1, rec] = step(inst, s0, encode_input(0.3, cfg.n_modes));
  CHECK(s1.step_index == 1);
  CHECK(rec.step_index == 0);
  CHECK(rec.sigma_out.matrix().rows() == 6);
  CHECK(s1.sigma_r.matrix().rows() == 6);
  // Physical state: uncertainty relation holds on both registers.
  CHECK(s1.sigma_r.uncertainty_defect() >= -kUncertaintyTol);
  CHECK(rec.sigma_out.uncertainty_defect() >= -kUncertaintyTol);

  // Dimension mismatch between state and instance throws.
  const ReservoirState wrong = initial_state(4);
  CHECK_THROWS_AS((void)step(inst, wrong, encode_input(0.3, 4)), std::invalid_argument);
}

TEST_CASE("step agrees with direct conjugation of the joint covariance") {
  ReservoirConfig cfg = small_config();
  RngStream rng(29);
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  ReservoirState state = initial_state(cfg.n_modes);
  // Advance a few steps so the reservoir block is nontrivial.
  for (double s : {0.2, -0.7, 0.5}) {
    state = step(inst, state, encode_input(s, cfg.n_modes)).first;
  }
  const CovarianceMatrix sigma_in = encode_input(-0.1, cfg.n_modes);
  RealMatrix joint = RealMatrix::Zero(12, 12);
  joint.topLeftCorner(6, 6) = state.sigma_r.matrix();
  joint.bottomRightCorner(6, 6) = sigma_in.matrix();
  const RealMatrix expected = inst.s_step * joint * inst.s_step.transpose();
  const auto [next, rec] = step(inst, state, sigma_in);
  CHECK((next.sigma_r.matrix() - expected.topLeftCorner(6, 6)).cwiseAbs().maxCoeff() <=
        1e-14 * expected.cwiseAbs().maxCoeff());
  CHECK((rec.sigma_out.matrix() - expected.bottomRightCorner(6, 6)).cwiseAbs().maxCoeff() <=
        1e-14 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("run_trajectory returns one record per input and rejects empty input") {
  ReservoirConfig cfg = small_config();
  RngStream rng(31);
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  std::vector<double> inputs{0.1, -0.4, 0.9, 0.0};
  const auto records = run_trajectory(inst, inputs, initial_state(cfg.n_modes));
  CHECK(records.size() == 4);
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(records[k].step_index == static_cast<std::int64_t>(k));
    CHECK(records[k].sigma_out.matrix().rows() == 6);
  }
  CHECK_THROWS_AS((void)run_trajectory(inst, {}, initial_state(cfg.n_modes)),
                  std::invalid_argument);
}

TEST_CASE("echo state property: washout erases the initial state") {
  ReservoirConfig cfg;  // full 7-mode defaults
  RngStream rng(2026);
  const ReservoirInstance inst = init_reservoir(cfg, rng);

  RngStream in_rng = rng.child(1);
  std::vector<double> inputs(550);
  for (double& s : inputs) s = in_rng.uniform(-1.0, 1.0);

  // Second start: a far-from-vacuum product of squeezed thermal states.
  RealMatrix alt = RealMatrix::Identity(14, 14);
  for (Eigen::Index j = 0; j < 7; ++j) {
    alt.block<2, 2>(2 * j, 2 * j) = squeezed_vacuum_cov(0.9, 0.0, 1.5).matrix();
  }
  const auto a = run_trajectory(inst, inputs, initial_state(7));
  const auto b = run_trajectory(
      inst, inputs, ReservoirState{CovarianceMatrix::unchecked(alt), 0});
  double diff = 0.0;
  for (std::size_t k = 500; k < inputs.size(); ++k) {
    diff = std::max(diff, (a[k].sigma_out.matrix() - b[k].sigma_out.matrix())
                              .cwiseAbs()
                              .maxCoeff());
  }
  CHECK(diff <= 1e-8);
}

TEST_CASE("long runs stay bounded") {
  ReservoirConfig cfg;
  RngStream rng(55);
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  RngStream in_rng(56);
  std::vector<double> inputs(800);
  for (double& s : inputs) s = in_rng.uniform(-1.0, 1.0);
  const auto records = run_trajectory(inst, inputs, initial_state(7));
  double peak = 0.0;
  for (const auto& r : records) {
    peak = std::max(peak, r.sigma_out.matrix().cwiseAbs().maxCoeff());
  }
  CHECK(peak < 1e4);
  CHECK(std::isfinite(peak));
}
