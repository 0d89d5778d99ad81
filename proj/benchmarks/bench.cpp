// Microbenchmarks for the hot paths: propagator construction, reservoir
// stepping, feature extraction, ensemble-noise draws, and readout training.
#include <vector>

#include <benchmark/benchmark.h>

#include <cvqrc/features.hpp>
#include <cvqrc/gaussian.hpp>
#include <cvqrc/readout.hpp>
#include <cvqrc/reservoir.hpp>
#include <cvqrc/rng.hpp>
#include <cvqrc/special_functions.hpp>
#include <cvqrc/tasks.hpp>
#include <cvqrc/wishart.hpp>

namespace {

using namespace cvqrc;

ReservoirInstance default_instance() {
  ReservoirConfig cfg;  // 7 modes, R = 0.75, dt = 2
  RngStream rng(12345);
  return init_reservoir(cfg, rng);
}

std::vector<StepRecord> warm_records(std::int64_t steps) {
  const ReservoirInstance inst = default_instance();
  RngStream rng(777);
  const std::vector<double> inputs = gen_inputs(steps, rng);
  return run_trajectory(inst, inputs, initial_state(inst.config.n_modes));
}

void BM_Propagator(benchmark::State& state) {
  RngStream rng(5);
  ReservoirConfig cfg;
  const ReservoirInstance inst = init_reservoir(cfg, rng);
  const RealMatrix m = hamiltonian_matrix({inst.omegas, inst.g1, inst.h1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagator(m, 2.0));
  }
}
BENCHMARK(BM_Propagator)->Unit(benchmark::kMicrosecond);

void BM_InitReservoir(benchmark::State& state) {
  ReservoirConfig cfg;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    RngStream rng(seed++);
    benchmark::DoNotOptimize(init_reservoir(cfg, rng));
  }
}
BENCHMARK(BM_InitReservoir)->Unit(benchmark::kMicrosecond);

void BM_ReservoirStep(benchmark::State& state) {
  const ReservoirInstance inst = default_instance();
  ReservoirState st = initial_state(inst.config.n_modes);
  const CovarianceMatrix sigma_in = encode_input(0.4, inst.config.n_modes);
  for (auto _ : state) {
    auto [next, rec] = step(inst, st, sigma_in);
    st = std::move(next);
    benchmark::DoNotOptimize(rec);
  }
}
BENCHMARK(BM_ReservoirStep)->Unit(benchmark::kMicrosecond);

void BM_BivariateCdf(benchmark::State& state) {
  double h = -2.0;
  for (auto _ : state) {
    h = (h >= 2.0) ? -2.0 : h + 0.1;  // walk the argument to defeat caching
    benchmark::DoNotOptimize(bivariate_normal_cdf(h, -0.3, 0.55));
  }
}
BENCHMARK(BM_BivariateCdf);

void BM_BvFeaturesPerStep(benchmark::State& state) {
  const auto records = warm_records(8);
  const RealMatrix sigma_x = x_submatrix(records.back().sigma_out);
  const auto grid = bv_grid_square(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bv_cdf_features(sigma_x, grid));
  }
}
BENCHMARK(BM_BvFeaturesPerStep)->Unit(benchmark::kMicrosecond);

void BM_WishartDraw(benchmark::State& state) {
  const auto records = warm_records(8);
  const RealMatrix sigma_x = x_submatrix(records.back().sigma_out);
  FeatureScheme scheme;
  scheme.ensemble = state.range(0);
  RngStream rng(99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_ensemble_noise(sigma_x, scheme, rng));
  }
}
BENCHMARK(BM_WishartDraw)->Arg(100)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

void BM_AssembleBv9Window(benchmark::State& state) {
  const auto records = warm_records(state.range(0) + 16);
  FeatureScheme scheme;
  scheme.bv_grid = bv_grid_square(3);
  const RngStream rng(3);
  const WindowSpec window{16, 16 + state.range(0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_feature_matrix(records, scheme, window, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssembleBv9Window)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TrainReadout(benchmark::State& state) {
  const Eigen::Index rows = 2000, cols = state.range(0);
  RngStream rng(17);
  FeatureMatrix o;
  o.values.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) o.values(i, j) = rng.normal();
  }
  std::vector<double> y(rows);
  for (double& v : y) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(o, y));
  }
  state.SetLabel("rows=2000");
}
BENCHMARK(BM_TrainReadout)->Arg(29)->Arg(218)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
