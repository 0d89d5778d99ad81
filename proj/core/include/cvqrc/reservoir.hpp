#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <cvqrc/gaussian.hpp>
#include <cvqrc/rng.hpp>
#include <cvqrc/types.hpp>

namespace cvqrc {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Per-mode frequency assignment: one shared constant, an explicit list,
// or i.i.d. uniform draws at instantiation time.
struct OmegaRule {
  enum class Kind { constant, per_mode, random_range };
  Kind kind = Kind::random_range;
  double value = 1.0;           // constant
  std::vector<double> values;   // per_mode
  Interval range{0.5, 1.5};     // random_range

  static OmegaRule constant_rule(double v);
  static OmegaRule per_mode_rule(std::vector<double> v);
  static OmegaRule random_range_rule(double lo, double hi);
};

struct ReservoirConfig {
  Eigen::Index n_modes = 7;
  double reflectivity = 0.75;
  Interval g_range{0.1, 0.3};
  Interval h_range{0.2, 0.4};
  OmegaRule omega{};  // frequency spread keeps the mode spectrum non-degenerate
  double dt = 2.0;
  std::uint64_t seed = 0;
};

struct ReservoirInstance {
  ReservoirConfig config;
  RealVector omegas;
  // Drawn couplings for the two crystals, symmetric with zero diagonal.
  RealMatrix g1, h1, g2, h2;
  SymplecticMatrix s_step;  // 4N x 4N: beam splitter, then both crystals
};

struct ReservoirState {
  CovarianceMatrix sigma_r;
  std::int64_t step_index = 0;
};

struct StepRecord {
  std::int64_t step_index = 0;
  CovarianceMatrix sigma_out;
};

// Couplings drawn uniformly from the configured ranges (upper triangle,
// row-major, g before h, crystal 1 before crystal 2, frequencies first).
// Draws are rejected and retried until the feedback operator sqrt(R) * S1 is
// a strict contraction (spectral radius <= 0.97), which guarantees the echo
// state property; throws std::runtime_error after 1000 rejected draws.
ReservoirInstance init_reservoir(const ReservoirConfig& config, RngStream& rng);

// Vacuum start at step 0.
ReservoirState initial_state(Eigen::Index n_modes);

// Product state of N single-mode squeezed vacua with r = (s+1)/2.
CovarianceMatrix encode_input(double s, Eigen::Index n_modes);

std::pair<ReservoirState, StepRecord> step(const ReservoirInstance& instance,
                                           const ReservoirState& state,
                                           const CovarianceMatrix& sigma_in);

std::vector<StepRecord> run_trajectory(const ReservoirInstance& instance,
                                       const std::vector<double>& inputs,
                                       const ReservoirState& initial);

}  // namespace cvqrc
