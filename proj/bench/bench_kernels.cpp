#include <benchmark/benchmark.h>

#include <vector>

#include "ecf/asymptotics.hpp"
#include "ecf/ecf.hpp"
#include "ecf/simlab.hpp"

namespace {

using namespace ecf;

void BM_SimulateTn(benchmark::State& state, Execution exec) {
  SimConfig cfg;
  cfg.model = DistributionModel::exponential(1.0);
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.replicates = 200;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_tn(cfg, exec).variance);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.replicates));
}
BENCHMARK_CAPTURE(BM_SimulateTn, serial, Execution::serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SimulateTn, parallel, Execution::parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CovGrid(benchmark::State& state, Execution exec) {
  const auto m = DistributionModel::normal(0.0, 1.0);
  std::vector<double> grid;
  for (int i = 0; i < state.range(0); ++i) grid.push_back(0.1 + 0.8 * i / (state.range(0) - 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(cov_grid_theoretical(m, grid, exec).min_eigenvalue);
}
BENCHMARK_CAPTURE(BM_CovGrid, serial, Execution::serial)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CovGrid, parallel, Execution::parallel)->Arg(5)->Arg(15)->Unit(benchmark::kMillisecond);

// Whole curve from prefix sums against re-summing every bucket.
void BM_CurveFast(benchmark::State& state) {
  const auto s = sample_iid(DistributionModel::normal(0.0, 1.0), static_cast<std::size_t>(state.range(0)), 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(ecf_curve(s).crossing_k);
}
BENCHMARK(BM_CurveFast)->Arg(100)->Arg(1000)->Arg(10000);

void BM_CurveNaive(benchmark::State& state) {
  const auto s = sample_iid(DistributionModel::normal(0.0, 1.0), static_cast<std::size_t>(state.range(0)), 1, 0);
  const auto w = s.values();
  const std::size_t n = w.size();
  std::vector<double> g(n - 1);
  for (auto _ : state) {
    for (std::size_t k = 1; k < n; ++k) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t j = 0; j < k; ++j) lo += w[j];
      for (std::size_t j = k; j < n; ++j) hi += w[j];
      g[k - 1] = lo / k - w[k - 1] + hi / (n - k) - w[k];
    }
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_CurveNaive)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
