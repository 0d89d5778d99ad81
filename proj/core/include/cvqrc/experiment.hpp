#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <cvqrc/features.hpp>
#include <cvqrc/ipc.hpp>
#include <cvqrc/reservoir.hpp>

namespace cvqrc {

struct LabeledScheme {
  std::string label;
  FeatureScheme scheme;
};

struct NarmaTask {
  std::vector<int> orders = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
};

// "auto" restricts the delay enumeration to equal-entry lists exactly when the
// scheme is covariance-only (any memory depth, any ensemble size). Covariance
// features are affine in the input covariance, which is additive over delays,
// so cross-delay targets carry no capacity for them and the restriction is
// lossless. CDF features are nonlinear in the covariance and need the full walk.
enum class EqualDelays { automatic, on, off };

struct IPCTask {
  IPCConfig config;
  EqualDelays equal_delays = EqualDelays::automatic;
};

enum class SweepAxis { ensemble, memory, schemes };

struct SweepSpec {
  SweepAxis axis = SweepAxis::schemes;
  std::vector<std::int64_t> values;  // M values (0 = infinite) or memory depths
};

struct ExperimentConfig {
  ReservoirConfig reservoir;
  std::vector<LabeledScheme> schemes;
  std::optional<NarmaTask> narma;  // exactly one task set
  std::optional<IPCTask> ipc;
  std::optional<SweepSpec> sweep;  // consumed by sweep() only
  int realizations = 50;
  std::uint64_t base_seed = 1;
  std::string output = "out";
  int workers = 1;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure inside a realization/scheme cell, with enough context to
// reproduce it in isolation.
struct RunError : std::runtime_error {
  RunError(const std::string& message, std::uint64_t seed_value, std::string scheme)
      : std::runtime_error(message), seed(seed_value), scheme_label(std::move(scheme)) {}
  std::uint64_t seed;
  std::string scheme_label;
};

// Long result table: one row per (scheme, realization, metric), plus aggregate
// rows whose seed column reads "mean" / "sd". Aggregates are recomputable from
// the per-realization rows above them.
struct ResultRow {
  std::string scheme;
  std::string seed;
  std::string metric;
  double value = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

void append_aggregate_rows(ResultTable& table);
std::string to_csv(const ResultTable& table);

struct SchemeRealizationReport {
  std::string scheme;
  std::uint64_t seed = 0;
  IPCReport report;
};

struct IPCRunResult {
  ResultTable table;
  std::vector<SchemeRealizationReport> reports;
};

// Runners. Realization i uses seed base_seed + i; from RngStream(seed),
// child(0) drives the reservoir draws, child(1) the input sequence, and
// child(2 + cell_index) the measurement noise of each scheme/axis cell, so
// every cell sees identical reservoirs and inputs (paired comparisons) and
// results do not depend on evaluation order or worker count.
ResultTable run_narma(const ExperimentConfig& config);
IPCRunResult run_ipc(const ExperimentConfig& config);
ResultTable sweep(const ExperimentConfig& config);

// Strict JSON config: unknown keys are hard errors, parse and semantic
// messages carry line/column or key-path context.
ExperimentConfig parse_config(const std::string& json_text);
std::string config_schema();

// FNV-1a 64 over the raw config text.
std::uint64_t config_hash(const std::string& config_text);

// Deterministic exports: no timestamps, fixed key order, %.17g numbers.
std::string ipc_reports_to_json(const std::vector<SchemeRealizationReport>& reports);
std::string metadata_json(const ExperimentConfig& config, const std::string& config_text);

}  // namespace cvqrc
