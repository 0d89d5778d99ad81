#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include <cvqrc/experiment.hpp>

#include <json.hpp>

using namespace cvqrc;

namespace {

// Small but complete config; NARMA runs use the full fixed split, so a
// 3-mode reservoir keeps the suite quick.
std::string narma_config_text() {
  return R"({
    "reservoir": {"n_modes": 3, "dt": 2.0},
    "schemes": [{"label": "cov"}],
    "task": {"type": "narma", "orders": [2, 3]},
    "realizations": 2,
    "base_seed": 77
  })";
}

std::string ipc_config_text(int workers = 1) {
  return R"({
    "reservoir": {"n_modes": 3},
    "schemes": [
      {"label": "cov"},
      {"label": "cov-noisy", "ensemble": 2000}
    ],
    "task": {"type": "ipc", "d_max": 2, "tau_max": 20,
             "washout": 80, "train": 1500, "test": 800},
    "realizations": 2,
    "base_seed": 400,
    "workers": )" +
         std::to_string(workers) + "}";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_config fills defaults and reads every section") {
  const ExperimentConfig cfg = parse_config(R"({
    "reservoir": {
      "n_modes": 5, "reflectivity": 0.6, "g_range": [0.15, 0.25],
      "h_range": [0.2, 0.3], "omega": {"rule": "constant", "value": 1.1}, "dt": 1.5
    },
    "schemes": [
      {"label": "full", "cov": true, "uv_points": 4, "bv_grid": 2,
       "memory": 2, "ensemble": 100000},
      {"label": "explicit", "uv_points": [0.3, 0.9], "bv_grid": [[0.1, 0.6]],
       "ensemble": "inf"}
    ],
    "task": {"type": "ipc", "d_max": 4, "tau_max": 30, "threshold": 1e-6,
             "patience": 50, "washout": 100, "train": 2000, "test": 1000,
             "equal_delays": false},
    "sweep": {"axis": "ensemble", "values": ["inf", 10000]},
    "realizations": 3,
    "base_seed": 42,
    "output": "runs",
    "workers": 2
  })");

  CHECK(cfg.reservoir.n_modes == 5);
  CHECK(cfg.reservoir.reflectivity == 0.6);
  CHECK(cfg.reservoir.g_range.lo == 0.15);
  CHECK(cfg.reservoir.omega.kind == OmegaRule::Kind::constant);
  CHECK(cfg.reservoir.omega.value == 1.1);
  CHECK(cfg.reservoir.dt == 1.5);

  REQUIRE(cfg.schemes.size() == 2);
  CHECK(cfg.schemes[0].scheme.uv_points.size() == 4);
  CHECK(cfg.schemes[0].scheme.bv_grid.size() == 4);
  CHECK(cfg.schemes[0].scheme.memory_depth == 2);
  CHECK(cfg.schemes[0].scheme.ensemble == 100000);
  CHECK(cfg.schemes[1].scheme.uv_points == std::vector<double>{0.3, 0.9});
  CHECK(cfg.schemes[1].scheme.ensemble == kInfiniteEnsemble);

  REQUIRE(cfg.ipc.has_value());
  CHECK_FALSE(cfg.narma.has_value());
  CHECK(cfg.ipc->config.d_max == 4);
  CHECK(cfg.ipc->config.threshold == 1e-6);
  CHECK(cfg.ipc->equal_delays == EqualDelays::off);

  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->axis == SweepAxis::ensemble);
  CHECK(cfg.sweep->values == std::vector<std::int64_t>{kInfiniteEnsemble, 10000});

  CHECK(cfg.realizations == 3);
  CHECK(cfg.base_seed == 42);
  CHECK(cfg.output == "runs");
  CHECK(cfg.workers == 2);
}

TEST_CASE("parse_config defaults omega to the random range rule") {
  const ExperimentConfig cfg = parse_config(narma_config_text());
  CHECK(cfg.reservoir.omega.kind == OmegaRule::Kind::random_range);
  CHECK(cfg.reservoir.omega.range.lo == 0.5);
  CHECK(cfg.reservoir.omega.range.hi == 1.5);
  REQUIRE(cfg.narma.has_value());
  CHECK(cfg.narma->orders == std::vector<int>{2, 3});
  REQUIRE(cfg.ipc.has_value() == false);
}

TEST_CASE("parse_config rejects unknown keys with the exact path") {
  const std::string msg = error_of(R"({
    "reservoir": {"n_modes": 3, "coupling": 1},
    "schemes": [{"label": "cov"}],
    "task": {"type": "narma"}
  })");
  CHECK(contains(msg, "/reservoir/coupling"));
  CHECK(contains(msg, "unknown key"));

  CHECK(contains(error_of(R"({
    "schemes": [{"label": "cov", "points": 3}],
    "task": {"type": "narma"}
  })"),
                 "/schemes/0/points"));
}

TEST_CASE("parse_config reports parse errors with line and column") {
  const std::string msg = error_of("{\n  \"schemes\": oops\n}");
  CHECK(contains(msg, "parse error"));
  CHECK(contains(msg, "line 2"));
}

TEST_CASE("parse_config semantic validation") {
  // Missing task.
  CHECK(contains(error_of(R"({"schemes": [{"label": "cov"}]})"), "task"));
  // Missing schemes.
  CHECK(contains(error_of(R"({"task": {"type": "narma"}})"), "schemes"));
  // Unknown task type.
  CHECK(contains(error_of(R"({
    "schemes": [{"label": "cov"}],
    "task": {"type": "esn"}
  })"),
                 "\"narma\" or \"ipc\""));
  // Scheme invalid for the reservoir size, reported with its label.
  CHECK(contains(error_of(R"({
    "reservoir": {"n_modes": 7},
    "schemes": [{"label": "tiny-M", "ensemble": 3}],
    "task": {"type": "narma"}
  })"),
                 "tiny-M"));
  // Bad equal_delays value.
  CHECK(contains(error_of(R"({
    "schemes": [{"label": "cov"}],
    "task": {"type": "ipc", "equal_delays": "maybe"}
  })"),
                 "equal_delays"));
  // Bad omega rule.
  CHECK(contains(error_of(R"({
    "reservoir": {"omega": {"rule": "comb"}},
    "schemes": [{"label": "cov"}],
    "task": {"type": "narma"}
  })"),
                 "/reservoir/omega/rule"));
  // Schemes axis takes no values.
  CHECK(contains(error_of(R"({
    "schemes": [{"label": "cov"}],
    "task": {"type": "narma"},
    "sweep": {"axis": "schemes", "values": [1]}
  })"),
                 "schemes axis"));
  // Nonpositive ensemble.
  CHECK(contains(error_of(R"({
    "schemes": [{"label": "cov", "ensemble": 0}],
    "task": {"type": "narma"}
  })"),
                 "ensemble"));
}

TEST_CASE("config_hash is FNV-1a 64 with frozen vectors") {
  CHECK(config_hash("") == 0xcbf29ce484222325ull);
  CHECK(config_hash("a") == 0xaf63dc4c8601ec8cull);
  CHECK(config_hash("{}") != config_hash("{} "));
}

TEST_CASE("to_csv and append_aggregate_rows") {
  ResultTable table;
  table.rows.push_back({"a", "7", "x", 0.25});
  table.rows.push_back({"a", "8", "x", 0.75});
  table.rows.push_back({"b", "7", "x", 2.0});
  append_aggregate_rows(table);

  REQUIRE(table.rows.size() == 7);
  CHECK(table.rows[3].seed == "mean");
  CHECK(table.rows[3].value == 0.5);
  CHECK(table.rows[4].seed == "sd");
  // Sample sd of {0.25, 0.75}: |d|/sqrt(2) with d = 0.5.
  CHECK(table.rows[4].value == doctest::Approx(0.35355339059327373).epsilon(1e-15));
  CHECK(table.rows[5].scheme == "b");
  CHECK(table.rows[6].value == 0.0);  // single sample, sd pinned to zero

  const std::string csv = to_csv(table);
  CHECK(contains(csv, "scheme,seed,metric,value\n"));
  CHECK(contains(csv, "a,7,x,0.25\n"));
  CHECK(contains(csv, "a,mean,x,0.5\n"));
  CHECK(contains(csv, "b,sd,x,0\n"));

  // Aggregates are idempotent: recomputing skips existing mean/sd rows.
  ResultTable again = table;
  append_aggregate_rows(again);
  CHECK(again.rows.size() == table.rows.size() + 4);
}

TEST_CASE("run_narma is deterministic and worker-count independent") {
  const ExperimentConfig cfg = parse_config(narma_config_text());
  const ResultTable a = run_narma(cfg);
  const ResultTable b = run_narma(cfg);
  CHECK(to_csv(a) == to_csv(b));

  ExperimentConfig threaded = cfg;
  threaded.workers = 3;
  const ResultTable c = run_narma(threaded);
  CHECK(to_csv(a) == to_csv(c));

  // Two realizations, one scheme, two orders, nmse + capacity, plus mean/sd
  // aggregate rows per (scheme, metric).
  CHECK(a.rows.size() == 2 * 1 * 2 * 2 + 4 * 2);
  int nmse_rows = 0;
  for (const auto& row : a.rows) {
    if (row.metric == "nmse@narma2" && row.seed != "mean" && row.seed != "sd") {
      ++nmse_rows;
      CHECK(row.value > 0.0);
      CHECK(row.value < 2.0);
    }
  }
  CHECK(nmse_rows == 2);
  // Seeds are base_seed + i.
  CHECK(std::any_of(a.rows.begin(), a.rows.end(),
                    [](const ResultRow& r) { return r.seed == "77"; }));
  CHECK(std::any_of(a.rows.begin(), a.rows.end(),
                    [](const ResultRow& r) { return r.seed == "78"; }));
}

TEST_CASE("run_ipc pairs schemes against the covariance reference") {
  const ExperimentConfig cfg = parse_config(ipc_config_text());
  const IPCRunResult res = run_ipc(cfg);

  // One report per scheme per realization, grouped by realization.
  REQUIRE(res.reports.size() == 4);
  CHECK(res.reports[0].scheme == "cov");
  CHECK(res.reports[1].scheme == "cov-noisy");
  CHECK(res.reports[0].seed == 400);
  CHECK(res.reports[2].seed == 401);

  // The reference ratio is exactly one; the noisy cell loses capacity.
  double ref_ratio = -1.0, noisy_ratio = -1.0;
  for (const auto& row : res.table.rows) {
    if (row.metric != "ipc_ratio" || row.seed != "400") continue;
    if (row.scheme == "cov") ref_ratio = row.value;
    if (row.scheme == "cov-noisy") noisy_ratio = row.value;
  }
  CHECK(ref_ratio == 1.0);
  CHECK(noisy_ratio > 0.0);
  CHECK(noisy_ratio < 1.0);

  // Per-degree rows exist for every degree up to d_max.
  CHECK(std::any_of(res.table.rows.begin(), res.table.rows.end(),
                    [](const ResultRow& r) { return r.metric == "ipc_deg2"; }));

  // Worker-count independence for the full result table.
  const IPCRunResult threaded = run_ipc(parse_config(ipc_config_text(4)));
  CHECK(to_csv(res.table) == to_csv(threaded.table));
}

TEST_CASE("sweep expands cells along the requested axis") {
  ExperimentConfig cfg = parse_config(ipc_config_text());
  SweepSpec spec;
  spec.axis = SweepAxis::ensemble;
  spec.values = {kInfiniteEnsemble, 5000};
  cfg.sweep = spec;
  cfg.schemes.resize(1);  // just "cov"
  const ResultTable table = sweep(cfg);

  bool saw_inf = false, saw_finite = false;
  for (const auto& row : table.rows) {
    if (row.scheme == "cov@M=inf") saw_inf = true;
    if (row.scheme == "cov@M=5000") saw_finite = true;
  }
  CHECK(saw_inf);
  CHECK(saw_finite);

  SweepSpec depth;
  depth.axis = SweepAxis::memory;
  depth.values = {0, 1};
  cfg.sweep = depth;
  const ResultTable lagged = sweep(cfg);
  double p0 = 0.0, p1 = 0.0;
  for (const auto& row : lagged.rows) {
    if (row.metric == "ipc_total" && row.seed == "mean") {
      if (row.scheme == "cov@P=0") p0 = row.value;
      if (row.scheme == "cov@P=1") p1 = row.value;
    }
  }
  CHECK(p0 > 0.0);
  CHECK(p1 > 1.3 * p0);  // stored steps add capacity

  cfg.sweep.reset();
  CHECK_THROWS_AS((void)sweep(cfg), ConfigError);
}

TEST_CASE("run errors carry the failing seed and scheme") {
  ExperimentConfig cfg = parse_config(narma_config_text());
  cfg.reservoir.reflectivity = 1.0;  // echo rejection can never succeed
  cfg.realizations = 1;
  try {
    (void)run_narma(cfg);
    FAIL("expected RunError");
  } catch (const RunError& e) {
    CHECK(e.seed == 77);
    CHECK(e.scheme_label == "(reservoir)");
    CHECK(contains(e.what(), "echo-stable"));
  }
}

TEST_CASE("metadata and report exports are deterministic") {
  const std::string text = ipc_config_text();
  const ExperimentConfig cfg = parse_config(text);
  const std::string meta = metadata_json(cfg, text);
  CHECK(meta == metadata_json(cfg, text));

  const auto parsed = nlohmann::json::parse(meta);
  CHECK(parsed["tool"] == "cvqrc");
  CHECK(parsed["base_seed"] == 400);
  CHECK(parsed["realizations"] == 2);
  CHECK(parsed["realization_seeds"] == nlohmann::json::array({400, 401}));
  const std::string hash = parsed["config_hash"].get<std::string>();
  CHECK(hash.rfind("fnv1a:", 0) == 0);
  CHECK(hash.size() == 6 + 16);
  CHECK_FALSE(contains(meta, "time"));

  const IPCRunResult res = run_ipc(cfg);
  const std::string reports = ipc_reports_to_json(res.reports);
  CHECK(reports == ipc_reports_to_json(res.reports));
  const auto rep = nlohmann::json::parse(reports);
  REQUIRE(rep["reports"].size() == 4);
  CHECK(rep["reports"][0]["scheme"] == "cov");
  CHECK(rep["reports"][0]["per_degree"].size() == 2);
  CHECK(rep["reports"][0]["total"].get<double>() > 0.0);
  CHECK(rep["reports"][0]["task_log"].size() > 0);
}
