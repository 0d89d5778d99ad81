#pragma once

#include <cstdint>
#include <vector>

#include <cvqrc/features.hpp>
#include <cvqrc/tasks.hpp>

namespace cvqrc {

struct IPCConfig {
  int d_max = 9;
  int tau_max = 75;
  double threshold = 1e-7;  // capacity floor for a task to contribute
  int patience = 100;       // consecutive non-contributing tasks ending a degree
  std::int64_t washout = 500;
  std::int64_t train = 8000;
  std::int64_t test = 2000;
  // Covariance-only schemes carry no cross-delay capacity, so restricting to
  // equal-entry lists loses nothing and skips an enumeration that patience
  // would otherwise walk through.
  bool equal_delays_only = false;
};

struct TaskLogEntry {
  DelayList delays;
  double capacity = 0.0;
};

struct IPCReport {
  std::vector<double> per_degree;  // indexed by degree, [0] unused
  double total = 0.0;
  std::vector<TaskLogEntry> task_log;  // contributing tasks in enumeration order
};

// Appendix-style capacity sweep: one feature matrix pair per scheme, then
// per degree an ordered walk of delay lists scored on the test window.
// Deterministic given records, inputs, scheme, config, and rng seed.
IPCReport compute_ipc(const std::vector<StepRecord>& records,
                      const std::vector<double>& inputs, const FeatureScheme& scheme,
                      const IPCConfig& config, const RngStream& rng);

}  // namespace cvqrc
