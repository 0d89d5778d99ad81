#include <cvqrc/experiment.hpp>

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include <Eigen/Core>

#include <cvqrc/linalg.hpp>
#include <cvqrc/readout.hpp>
#include <cvqrc/tasks.hpp>

#include <json.hpp>

namespace cvqrc {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// NARMA runs use the same split as the default IPC protocol.
constexpr std::int64_t kNarmaWashout = 500;
constexpr std::int64_t kNarmaTrain = 8000;
constexpr std::int64_t kNarmaTest = 2000;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config error at " + path + ": " + message);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> known) {
  for (const auto& item : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return item.key() == k;
        }) == known.end()) {
      fail(path + "/" + item.key(), "unknown key");
    }
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Interval get_interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
  return {get_number(v[0], path + "/0"), get_number(v[1], path + "/1")};
}

OmegaRule parse_omega(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object with a \"rule\" key");
  const std::string rule = v.contains("rule") ? get_string(v["rule"], path + "/rule")
                                              : (fail(path, "missing \"rule\""), "");
  if (rule == "constant") {
    require_keys(v, path, {"rule", "value"});
    if (!v.contains("value")) fail(path, "constant rule needs \"value\"");
    return OmegaRule::constant_rule(get_number(v["value"], path + "/value"));
  }
  if (rule == "per_mode") {
    require_keys(v, path, {"rule", "values"});
    if (!v.contains("values") || !v["values"].is_array())
      fail(path, "per_mode rule needs a \"values\" array");
    std::vector<double> vals;
    for (std::size_t i = 0; i < v["values"].size(); ++i)
      vals.push_back(get_number(v["values"][i], path + "/values/" + std::to_string(i)));
    return OmegaRule::per_mode_rule(std::move(vals));
  }
  if (rule == "random_range") {
    require_keys(v, path, {"rule", "range"});
    if (!v.contains("range")) fail(path, "random_range rule needs \"range\"");
    const Interval r = get_interval(v["range"], path + "/range");
    return OmegaRule::random_range_rule(r.lo, r.hi);
  }
  fail(path + "/rule", "expected \"constant\", \"per_mode\", or \"random_range\"");
}

ReservoirConfig parse_reservoir(const json& v, const std::string& path) {
  ReservoirConfig cfg;
  if (!v.is_object()) fail(path, "expected an object");
  require_keys(v, path,
               {"n_modes", "reflectivity", "g_range", "h_range", "omega", "dt"});
  if (v.contains("n_modes")) cfg.n_modes = get_int(v["n_modes"], path + "/n_modes");
  if (v.contains("reflectivity"))
    cfg.reflectivity = get_number(v["reflectivity"], path + "/reflectivity");
  if (v.contains("g_range")) cfg.g_range = get_interval(v["g_range"], path + "/g_range");
  if (v.contains("h_range")) cfg.h_range = get_interval(v["h_range"], path + "/h_range");
  if (v.contains("omega")) cfg.omega = parse_omega(v["omega"], path + "/omega");
  if (v.contains("dt")) cfg.dt = get_number(v["dt"], path + "/dt");
  return cfg;
}

std::int64_t parse_ensemble(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfiniteEnsemble;
    fail(path, "expected \"inf\" or a positive integer");
  }
  const std::int64_t m = get_int(v, path);
  if (m <= 0) fail(path, "ensemble size must be positive (use \"inf\" for ideal)");
  return m;
}

LabeledScheme parse_scheme(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  require_keys(v, path, {"label", "cov", "uv_points", "bv_grid", "memory", "ensemble"});
  LabeledScheme out;
  if (!v.contains("label")) fail(path, "missing \"label\"");
  out.label = get_string(v["label"], path + "/label");
  if (out.label.empty() || out.label.find_first_of(",\n\"") != std::string::npos)
    fail(path + "/label", "label must be nonempty without commas or quotes");
  if (v.contains("cov")) {
    if (!v["cov"].is_boolean()) fail(path + "/cov", "expected a boolean");
    out.scheme.include_cov = v["cov"].get<bool>();
  }
  if (v.contains("uv_points")) {
    const json& u = v["uv_points"];
    if (u.is_number_integer()) {
      const std::int64_t n = u.get<std::int64_t>();
      if (n < 0) fail(path + "/uv_points", "count must be nonnegative");
      if (n > 0) out.scheme.uv_points = uv_points_uniform(static_cast<int>(n));
    } else if (u.is_array()) {
      for (std::size_t i = 0; i < u.size(); ++i)
        out.scheme.uv_points.push_back(
            get_number(u[i], path + "/uv_points/" + std::to_string(i)));
    } else {
      fail(path + "/uv_points", "expected a count or an array of thresholds");
    }
  }
  if (v.contains("bv_grid")) {
    const json& b = v["bv_grid"];
    if (b.is_number_integer()) {
      const std::int64_t side = b.get<std::int64_t>();
      if (side < 0) fail(path + "/bv_grid", "side must be nonnegative");
      if (side > 0) out.scheme.bv_grid = bv_grid_square(static_cast<int>(side));
    } else if (b.is_array()) {
      for (std::size_t i = 0; i < b.size(); ++i) {
        const std::string p = path + "/bv_grid/" + std::to_string(i);
        if (!b[i].is_array() || b[i].size() != 2) fail(p, "expected [c1, c2]");
        out.scheme.bv_grid.push_back(
            {get_number(b[i][0], p + "/0"), get_number(b[i][1], p + "/1")});
      }
    } else {
      fail(path + "/bv_grid", "expected a grid side or an array of [c1, c2] pairs");
    }
  }
  if (v.contains("memory")) {
    const std::int64_t p = get_int(v["memory"], path + "/memory");
    if (p < 0) fail(path + "/memory", "memory depth must be nonnegative");
    out.scheme.memory_depth = p;
  }
  if (v.contains("ensemble"))
    out.scheme.ensemble = parse_ensemble(v["ensemble"], path + "/ensemble");
  return out;
}

NarmaTask parse_narma(const json& v, const std::string& path) {
  require_keys(v, path, {"type", "orders"});
  NarmaTask task;
  if (v.contains("orders")) {
    if (!v["orders"].is_array() || v["orders"].empty())
      fail(path + "/orders", "expected a nonempty array of orders");
    task.orders.clear();
    for (std::size_t i = 0; i < v["orders"].size(); ++i) {
      const std::int64_t n =
          get_int(v["orders"][i], path + "/orders/" + std::to_string(i));
      if (n < 1) fail(path + "/orders/" + std::to_string(i), "order must be >= 1");
      task.orders.push_back(static_cast<int>(n));
    }
  }
  return task;
}

IPCTask parse_ipc(const json& v, const std::string& path) {
  require_keys(v, path, {"type", "d_max", "tau_max", "threshold", "patience", "washout",
                         "train", "test", "equal_delays"});
  IPCTask task;
  IPCConfig& c = task.config;
  if (v.contains("d_max")) c.d_max = static_cast<int>(get_int(v["d_max"], path + "/d_max"));
  if (v.contains("tau_max"))
    c.tau_max = static_cast<int>(get_int(v["tau_max"], path + "/tau_max"));
  if (v.contains("threshold")) c.threshold = get_number(v["threshold"], path + "/threshold");
  if (v.contains("patience"))
    c.patience = static_cast<int>(get_int(v["patience"], path + "/patience"));
  if (v.contains("washout")) c.washout = get_int(v["washout"], path + "/washout");
  if (v.contains("train")) c.train = get_int(v["train"], path + "/train");
  if (v.contains("test")) c.test = get_int(v["test"], path + "/test");
  if (v.contains("equal_delays")) {
    const json& e = v["equal_delays"];
    if (e.is_string() && e.get<std::string>() == "auto") {
      task.equal_delays = EqualDelays::automatic;
    } else if (e.is_boolean()) {
      task.equal_delays = e.get<bool>() ? EqualDelays::on : EqualDelays::off;
    } else {
      fail(path + "/equal_delays", "expected \"auto\", true, or false");
    }
  }
  return task;
}

SweepSpec parse_sweep(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  require_keys(v, path, {"axis", "values"});
  if (!v.contains("axis")) fail(path, "missing \"axis\"");
  SweepSpec spec;
  const std::string axis = get_string(v["axis"], path + "/axis");
  if (axis == "ensemble") {
    spec.axis = SweepAxis::ensemble;
  } else if (axis == "memory") {
    spec.axis = SweepAxis::memory;
  } else if (axis == "schemes") {
    spec.axis = SweepAxis::schemes;
  } else {
    fail(path + "/axis", "expected \"ensemble\", \"memory\", or \"schemes\"");
  }
  if (spec.axis != SweepAxis::schemes) {
    if (!v.contains("values") || !v["values"].is_array() || v["values"].empty())
      fail(path, "axis needs a nonempty \"values\" array");
    for (std::size_t i = 0; i < v["values"].size(); ++i) {
      const std::string p = path + "/values/" + std::to_string(i);
      if (spec.axis == SweepAxis::ensemble) {
        spec.values.push_back(parse_ensemble(v["values"][i], p));
      } else {
        const std::int64_t depth = get_int(v["values"][i], p);
        if (depth < 0) fail(p, "memory depth must be nonnegative");
        spec.values.push_back(depth);
      }
    }
  } else if (v.contains("values")) {
    fail(path + "/values", "the schemes axis takes no values");
  }
  return spec;
}

// One scheme/axis cell: a concrete scheme plus its noise-stream slot.
struct Cell {
  std::string label;
  FeatureScheme scheme;
};

std::vector<Cell> base_cells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  cells.reserve(config.schemes.size());
  for (const auto& s : config.schemes) cells.push_back({s.label, s.scheme});
  return cells;
}

std::string ensemble_suffix(std::int64_t m) {
  return m == kInfiniteEnsemble ? "@M=inf" : "@M=" + std::to_string(m);
}

std::vector<Cell> sweep_cells(const ExperimentConfig& config) {
  if (!config.sweep) throw ConfigError("sweep requires a \"sweep\" section in the config");
  const SweepSpec& spec = *config.sweep;
  if (spec.axis == SweepAxis::schemes) return base_cells(config);
  std::vector<Cell> cells;
  for (const auto& s : config.schemes) {
    for (const std::int64_t v : spec.values) {
      Cell cell{s.label, s.scheme};
      if (spec.axis == SweepAxis::ensemble) {
        cell.scheme.ensemble = v;
        cell.label += ensemble_suffix(v);
      } else {
        cell.scheme.memory_depth = v;
        cell.label += "@P=" + std::to_string(v);
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

bool covariance_only(const FeatureScheme& s) {
  return s.include_cov && s.uv_points.empty() && s.bv_grid.empty();
}

bool is_reference_scheme(const FeatureScheme& s) {
  return covariance_only(s) && s.memory_depth == 0 && s.ensemble == kInfiniteEnsemble;
}

IPCConfig resolve_ipc_config(const IPCTask& task, const FeatureScheme& scheme) {
  IPCConfig cfg = task.config;
  switch (task.equal_delays) {
    case EqualDelays::automatic:
      cfg.equal_delays_only = covariance_only(scheme);
      break;
    case EqualDelays::on:
      cfg.equal_delays_only = true;
      break;
    case EqualDelays::off:
      cfg.equal_delays_only = false;
      break;
  }
  return cfg;
}

void validate_experiment(const ExperimentConfig& config) {
  if (config.realizations < 1) throw ConfigError("realizations must be >= 1");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  if (config.schemes.empty()) throw ConfigError("at least one scheme is required");
  if (config.narma.has_value() == config.ipc.has_value())
    throw ConfigError("exactly one of the narma / ipc tasks must be configured");
  for (const auto& s : config.schemes) {
    try {
      validate_scheme(s.scheme, config.reservoir.n_modes);
    } catch (const std::exception& e) {
      throw ConfigError("scheme \"" + s.label + "\": " + e.what());
    }
  }
}

struct RealizationOutput {
  std::vector<ResultRow> rows;
  std::vector<SchemeRealizationReport> reports;
};

// Everything the per-realization worker computes, committed to slots indexed
// by realization so emission order never depends on scheduling.
template <typename CellFn>
std::vector<RealizationOutput> run_realizations(const ExperimentConfig& config,
                                                const std::vector<Cell>& cells,
                                                std::int64_t total_steps, CellFn&& cell_fn) {
  const int n = config.realizations;
  std::vector<RealizationOutput> slots(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};

  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(i);
      std::string active = "(reservoir)";
      try {
        RngStream root(seed);
        RngStream instance_rng = root.child(0);
        RngStream input_rng = root.child(1);
        ReservoirConfig rc = config.reservoir;
        rc.seed = seed;
        const ReservoirInstance instance = init_reservoir(rc, instance_rng);
        const std::vector<double> inputs = gen_inputs(total_steps, input_rng);
        const std::vector<StepRecord> records =
            run_trajectory(instance, inputs, initial_state(rc.n_modes));
        RealizationOutput& out = slots[static_cast<std::size_t>(i)];
        for (std::size_t c = 0; c < cells.size(); ++c) {
          active = cells[c].label;
          const RngStream noise_rng = root.child(2 + static_cast<std::uint64_t>(c));
          cell_fn(cells[c], seed, records, inputs, noise_rng, out);
        }
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] =
            std::make_exception_ptr(RunError(e.what(), seed, active));
      }
    }
  };

  const int pool = std::min(config.workers, n);
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return slots;
}

std::vector<double> slice(const std::vector<double>& y, std::int64_t begin, std::int64_t end) {
  return std::vector<double>(y.begin() + begin, y.begin() + end);
}

}  // namespace

void append_aggregate_rows(ResultTable& table) {
  // (scheme, metric) in first-appearance order.
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& row : table.rows) {
    if (row.seed == "mean" || row.seed == "sd") continue;
    const auto key = std::make_pair(row.scheme, row.metric);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(row.value);
  }
  for (const auto& key : order) {
    const std::vector<double>& vals = groups[key];
    const double n = static_cast<double>(vals.size());
    double mean = 0.0;
    for (const double v : vals) mean += v;
    mean /= n;
    double var = 0.0;
    for (const double v : vals) var += (v - mean) * (v - mean);
    const double sd = vals.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    table.rows.push_back({key.first, "mean", key.second, mean});
    table.rows.push_back({key.first, "sd", key.second, sd});
  }
}

std::string to_csv(const ResultTable& table) {
  std::string out = "scheme,seed,metric,value\n";
  for (const auto& row : table.rows) {
    out += row.scheme;
    out += ',';
    out += row.seed;
    out += ',';
    out += row.metric;
    out += ',';
    out += fmt_double(row.value);
    out += '\n';
  }
  return out;
}

ResultTable run_narma(const ExperimentConfig& config) {
  validate_experiment(config);
  if (!config.narma) throw ConfigError("run_narma needs a narma task");
  const std::vector<int> orders = config.narma->orders;
  const std::vector<Cell> cells = base_cells(config);
  const std::int64_t total = kNarmaWashout + kNarmaTrain + kNarmaTest;

  const auto cell_fn = [&](const Cell& cell, std::uint64_t seed,
                           const std::vector<StepRecord>& records,
                           const std::vector<double>& inputs, const RngStream& noise_rng,
                           RealizationOutput& out) {
    const WindowSpec train_w{kNarmaWashout, kNarmaWashout + kNarmaTrain};
    const WindowSpec test_w{kNarmaWashout + kNarmaTrain, total};
    const FeatureMatrix o_train =
        assemble_feature_matrix(records, cell.scheme, train_w, noise_rng);
    const FeatureMatrix o_test =
        assemble_feature_matrix(records, cell.scheme, test_w, noise_rng);
    const LeastSquaresSolver solver(o_train.values);

    RealMatrix y_train(kNarmaTrain, static_cast<Eigen::Index>(orders.size()));
    std::vector<std::vector<double>> y_test(orders.size());
    for (std::size_t j = 0; j < orders.size(); ++j) {
      NarmaParams params;
      params.n = orders[j];
      const std::vector<double> y = narma_target(inputs, params);
      for (std::int64_t k = 0; k < kNarmaTrain; ++k)
        y_train(k, static_cast<Eigen::Index>(j)) = y[static_cast<std::size_t>(train_w.start + k)];
      y_test[j] = slice(y, test_w.start, test_w.end);
    }
    const RealMatrix w = solver.solve(y_train);
    const RealMatrix y_hat = o_test.values * w;
    for (std::size_t j = 0; j < orders.size(); ++j) {
      std::vector<double> pred(static_cast<std::size_t>(y_hat.rows()));
      for (Eigen::Index k = 0; k < y_hat.rows(); ++k)
        pred[static_cast<std::size_t>(k)] = y_hat(k, static_cast<Eigen::Index>(j));
      const double err = nmse(y_test[j], pred);
      const std::string tag = "narma" + std::to_string(orders[j]);
      out.rows.push_back({cell.label, fmt_u64(seed), "nmse@" + tag, err});
      out.rows.push_back({cell.label, fmt_u64(seed), "capacity@" + tag, capacity(err)});
    }
  };

  const auto slots = run_realizations(config, cells, total, cell_fn);
  ResultTable table;
  for (const auto& slot : slots)
    table.rows.insert(table.rows.end(), slot.rows.begin(), slot.rows.end());
  append_aggregate_rows(table);
  return table;
}

IPCRunResult run_ipc(const ExperimentConfig& config) {
  validate_experiment(config);
  if (!config.ipc) throw ConfigError("run_ipc needs an ipc task");
  const IPCTask& task = *config.ipc;
  const std::vector<Cell> cells = base_cells(config);
  const std::int64_t total = task.config.washout + task.config.train + task.config.test;

  std::ptrdiff_t reference = -1;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (is_reference_scheme(cells[c].scheme)) {
      reference = static_cast<std::ptrdiff_t>(c);
      break;
    }
  }

  const auto cell_fn = [&](const Cell& cell, std::uint64_t seed,
                           const std::vector<StepRecord>& records,
                           const std::vector<double>& inputs, const RngStream& noise_rng,
                           RealizationOutput& out) {
    const IPCConfig cfg = resolve_ipc_config(task, cell.scheme);
    IPCReport report = compute_ipc(records, inputs, cell.scheme, cfg, noise_rng);
    out.rows.push_back({cell.label, fmt_u64(seed), "ipc_total", report.total});
    for (int d = 1; d <= cfg.d_max; ++d)
      out.rows.push_back({cell.label, fmt_u64(seed), "ipc_deg" + std::to_string(d),
                          report.per_degree[static_cast<std::size_t>(d)]});
    out.reports.push_back({cell.label, seed, std::move(report)});
  };

  const auto slots = run_realizations(config, cells, total, cell_fn);
  IPCRunResult result;
  for (const auto& slot : slots) {
    result.table.rows.insert(result.table.rows.end(), slot.rows.begin(), slot.rows.end());
    result.reports.insert(result.reports.end(), slot.reports.begin(), slot.reports.end());
  }
  // Paired per-realization ratios against the covariance-only reference cell.
  if (reference >= 0) {
    const std::string& ref_label = cells[static_cast<std::size_t>(reference)].label;
    for (const auto& slot : slots) {
      double ref_total = 0.0;
      for (const auto& rep : slot.reports)
        if (rep.scheme == ref_label) ref_total = rep.report.total;
      if (ref_total <= 0.0) continue;
      for (const auto& rep : slot.reports)
        result.table.rows.push_back(
            {rep.scheme, fmt_u64(rep.seed), "ipc_ratio", rep.report.total / ref_total});
    }
  }
  append_aggregate_rows(result.table);
  return result;
}

ResultTable sweep(const ExperimentConfig& config) {
  validate_experiment(config);
  const std::vector<Cell> cells = sweep_cells(config);
  ResultTable table;

  if (config.narma) {
    // Reuse run_narma's cell logic by substituting the expanded cells.
    ExperimentConfig expanded = config;
    expanded.schemes.clear();
    for (const auto& cell : cells) expanded.schemes.push_back({cell.label, cell.scheme});
    return run_narma(expanded);
  }
  const IPCTask& task = *config.ipc;
  const std::int64_t total = task.config.washout + task.config.train + task.config.test;
  const auto cell_fn = [&](const Cell& cell, std::uint64_t seed,
                           const std::vector<StepRecord>& records,
                           const std::vector<double>& inputs, const RngStream& noise_rng,
                           RealizationOutput& out) {
    const IPCConfig cfg = resolve_ipc_config(task, cell.scheme);
    const IPCReport report = compute_ipc(records, inputs, cell.scheme, cfg, noise_rng);
    out.rows.push_back({cell.label, fmt_u64(seed), "ipc_total", report.total});
    for (int d = 1; d <= cfg.d_max; ++d)
      out.rows.push_back({cell.label, fmt_u64(seed), "ipc_deg" + std::to_string(d),
                          report.per_degree[static_cast<std::size_t>(d)]});
  };
  const auto slots = run_realizations(config, cells, total, cell_fn);
  for (const auto& slot : slots)
    table.rows.insert(table.rows.end(), slot.rows.begin(), slot.rows.end());
  append_aggregate_rows(table);
  return table;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at " + locate(json_text, e.byte) + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  require_keys(root, "", {"reservoir", "schemes", "task", "sweep", "realizations",
                          "base_seed", "output", "workers"});
  ExperimentConfig cfg;
  if (root.contains("reservoir")) cfg.reservoir = parse_reservoir(root["reservoir"], "/reservoir");
  if (!root.contains("schemes") || !root["schemes"].is_array() || root["schemes"].empty())
    throw ConfigError("config needs a nonempty \"schemes\" array");
  for (std::size_t i = 0; i < root["schemes"].size(); ++i)
    cfg.schemes.push_back(parse_scheme(root["schemes"][i], "/schemes/" + std::to_string(i)));
  if (!root.contains("task")) throw ConfigError("config needs a \"task\" object");
  {
    const json& t = root["task"];
    if (!t.is_object() || !t.contains("type")) fail("/task", "expected an object with \"type\"");
    const std::string type = get_string(t["type"], "/task/type");
    if (type == "narma") {
      cfg.narma = parse_narma(t, "/task");
    } else if (type == "ipc") {
      cfg.ipc = parse_ipc(t, "/task");
    } else {
      fail("/task/type", "expected \"narma\" or \"ipc\"");
    }
  }
  if (root.contains("sweep")) cfg.sweep = parse_sweep(root["sweep"], "/sweep");
  if (root.contains("realizations")) {
    const std::int64_t n = get_int(root["realizations"], "/realizations");
    if (n < 1) fail("/realizations", "must be >= 1");
    cfg.realizations = static_cast<int>(n);
  }
  if (root.contains("base_seed")) {
    if (!root["base_seed"].is_number_unsigned() && !root["base_seed"].is_number_integer())
      fail("/base_seed", "expected an unsigned integer");
    if (root["base_seed"].is_number_integer() && root["base_seed"].get<std::int64_t>() < 0)
      fail("/base_seed", "must be nonnegative");
    cfg.base_seed = root["base_seed"].get<std::uint64_t>();
  }
  if (root.contains("output")) cfg.output = get_string(root["output"], "/output");
  if (root.contains("workers")) {
    const std::int64_t w = get_int(root["workers"], "/workers");
    if (w < 1) fail("/workers", "must be >= 1");
    cfg.workers = static_cast<int>(w);
  }
  validate_experiment(cfg);
  return cfg;
}

std::string config_schema() {
  return R"(Config schema (JSON object; every key optional unless noted, unknown keys rejected):

reservoir: {
  n_modes:       integer >= 1                      (default 7)
  reflectivity:  number in [0, 1]                  (default 0.75)
  g_range:       [lo, hi]                          (default [0.1, 0.3])
  h_range:       [lo, hi]                          (default [0.2, 0.4])
  omega:         {rule: "constant", value: w}
               | {rule: "per_mode", values: [w1, ...]}   # one per mode
               | {rule: "random_range", range: [lo, hi]}
                 (default: random_range [0.5, 1.5], drawn per realization)
  dt:            number > 0                        (default 2.0)
}
schemes (required): [ {
  label:     string (required; no commas/quotes)
  cov:       boolean                               (default true)
  uv_points: count | [thresholds...]               (default none; count lays
             thresholds uniformly on [0.1, 2.0])
  bv_grid:   side | [[c1, c2], ...]                (default none; side builds the
             square grid {0.1, 0.6, 1.1, ...}^2)
  memory:    integer >= 0, past steps appended     (default 0)
  ensemble:  "inf" | positive integer M            (default "inf")
} ... ]
task (required): {type: "narma", orders: [n, ...]}    (default orders 2..15)
               | {type: "ipc", d_max: 9, tau_max: 75, threshold: 1e-7, patience: 100,
                  washout: 500, train: 8000, test: 2000, equal_delays: "auto"|true|false}
sweep: {axis: "ensemble"|"memory"|"schemes", values: [...]}
       (ensemble values are "inf" or M; memory values are depths; the schemes
        axis takes no values. Used by the sweep subcommand only.)
realizations: integer >= 1                         (default 50)
base_seed:    unsigned integer                     (default 1; realization i
              uses seed base_seed + i)
output:       directory for result files           (default "out")
workers:      integer >= 1                         (default 1)
)";
}

std::uint64_t config_hash(const std::string& config_text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : config_text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string ipc_reports_to_json(const std::vector<SchemeRealizationReport>& reports) {
  ordered_json root;
  root["reports"] = ordered_json::array();
  for (const auto& rep : reports) {
    ordered_json r;
    r["scheme"] = rep.scheme;
    r["seed"] = rep.seed;
    ordered_json degrees = ordered_json::array();
    for (std::size_t d = 1; d < rep.report.per_degree.size(); ++d)
      degrees.push_back(rep.report.per_degree[d]);
    r["per_degree"] = std::move(degrees);
    r["total"] = rep.report.total;
    ordered_json log = ordered_json::array();
    for (const auto& entry : rep.report.task_log) {
      ordered_json e;
      e["delays"] = entry.delays;
      e["capacity"] = entry.capacity;
      log.push_back(std::move(e));
    }
    r["task_log"] = std::move(log);
    root["reports"].push_back(std::move(r));
  }
  return root.dump(2) + "\n";
}

std::string metadata_json(const ExperimentConfig& config, const std::string& config_text) {
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "fnv1a:%016" PRIx64, config_hash(config_text));
  ordered_json meta;
  meta["tool"] = "cvqrc";
  meta["tool_version"] = "0.1.0";
  meta["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION);
  meta["rng_algorithm"] = std::string(RngStream::algorithm_id);
  meta["config_hash"] = hash_buf;
  meta["base_seed"] = config.base_seed;
  meta["realizations"] = config.realizations;
  meta["workers"] = config.workers;
  ordered_json seeds = ordered_json::array();
  for (int i = 0; i < config.realizations; ++i)
    seeds.push_back(config.base_seed + static_cast<std::uint64_t>(i));
  meta["realization_seeds"] = std::move(seeds);
  return meta.dump(2) + "\n";
}

}  // namespace cvqrc
