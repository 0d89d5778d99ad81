// Experiment runner: NARMA/IPC benchmarks and sweeps over reservoir
// realizations, exporting deterministic CSV/JSON result files.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <cvqrc/experiment.hpp>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cvqrc::ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
};

void apply(const Overrides& ov, cvqrc::ExperimentConfig& cfg) {
  if (ov.seed) cfg.base_seed = *ov.seed;
  if (ov.realizations) cfg.realizations = *ov.realizations;
  if (ov.out_dir) cfg.output = *ov.out_dir;
  if (ov.workers) cfg.workers = *ov.workers;
}

void print_aggregates(const cvqrc::ResultTable& table) {
  std::printf("%-28s %-16s %14s %14s\n", "scheme", "metric", "mean", "sd");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.seed != "mean") continue;
    double sd = 0.0;
    if (i + 1 < table.rows.size() && table.rows[i + 1].seed == "sd") sd = table.rows[i + 1].value;
    std::printf("%-28s %-16s %14.6g %14.6g\n", row.scheme.c_str(), row.metric.c_str(),
                row.value, sd);
  }
}

int run_command(const std::string& command, const std::string& config_path,
                const Overrides& ov) {
  const std::string config_text = read_file(config_path);
  cvqrc::ExperimentConfig cfg = cvqrc::parse_config(config_text);
  apply(ov, cfg);

  if (command == "validate-config") {
    std::printf("config OK: %zu scheme(s), %s task, %d realization(s), base seed %llu\n",
                cfg.schemes.size(), cfg.narma ? "narma" : "ipc", cfg.realizations,
                static_cast<unsigned long long>(cfg.base_seed));
    return 0;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::filesystem::path out_dir(cfg.output);
  std::filesystem::create_directories(out_dir);

  cvqrc::ResultTable table;
  if (command == "run-narma") {
    table = cvqrc::run_narma(cfg);
    write_file(out_dir / "narma_results.csv", cvqrc::to_csv(table));
  } else if (command == "run-ipc") {
    cvqrc::IPCRunResult result = cvqrc::run_ipc(cfg);
    table = std::move(result.table);
    write_file(out_dir / "ipc_results.csv", cvqrc::to_csv(table));
    write_file(out_dir / "ipc_reports.json", cvqrc::ipc_reports_to_json(result.reports));
  } else {
    table = cvqrc::sweep(cfg);
    write_file(out_dir / "sweep_results.csv", cvqrc::to_csv(table));
  }
  write_file(out_dir / "metadata.json", cvqrc::metadata_json(cfg, config_text));

  print_aggregates(table);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "wrote %s (%.1f s)\n", out_dir.string().c_str(), elapsed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian reservoir computing benchmarks"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", ov.seed, "override base_seed");
    sub->add_option("--realizations", ov.realizations, "override realization count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", ov.out_dir, "override output directory");
    sub->add_option("--workers", ov.workers, "worker thread limit")
        ->check(CLI::PositiveNumber);
  };
  add_common(app.add_subcommand("run-narma", "NARMA NMSE benchmark"), true);
  add_common(app.add_subcommand("run-ipc", "information processing capacity"), true);
  add_common(app.add_subcommand("sweep", "sweep ensemble sizes or memory depths"), true);
  add_common(app.add_subcommand("validate-config", "parse and check a config"), true);
  app.add_subcommand("show-schema", "print the config schema");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  if (command == "show-schema") {
    std::fputs(cvqrc::config_schema().c_str(), stdout);
    return 0;
  }
  try {
    return run_command(command, config_path, ov);
  } catch (const cvqrc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const cvqrc::RunError& e) {
    std::fprintf(stderr, "numerical failure (seed=%llu, scheme=%s): %s\n",
                 static_cast<unsigned long long>(e.seed), e.scheme_label.c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 2;
  }
}
