#include <benchmark/benchmark.h>

#include "rftwin/dataset.hpp"
#include "rftwin/detectors.hpp"
#include "rftwin/knn.hpp"
#include "rftwin/scenario.hpp"

namespace {

rftwin::FeatureMatrix delta_matrix(std::size_t n, double grid = 10.0) {
  rftwin::ScenarioConfig c;
  c.sigma_shadow = 2;
  c.grid_size = grid;
  return rftwin::to_matrix(rftwin::generate(c, n, 1, 0.0).train);
}

void BM_KnnQuery(benchmark::State& state, rftwin::KnnBackend backend) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto grid = static_cast<double>(state.range(1));
  const rftwin::KnnIndex index(delta_matrix(n, grid), backend);
  const auto queries = delta_matrix(256, grid);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.query(queries.row(q), 10));
    q = (q + 1) % queries.rows();
  }
  state.SetLabel(backend == rftwin::KnnBackend::VpTree ? "vp-tree" : "brute-force");
}
// Second argument is the SU grid spacing: 5 m -> 81 dims, 10 m -> 25, 15 m -> 9.
BENCHMARK_CAPTURE(BM_KnnQuery, brute, rftwin::KnnBackend::BruteForce)
    ->ArgsProduct({benchmark::CreateRange(256, 16384, 4), {5, 10, 15}});
BENCHMARK_CAPTURE(BM_KnnQuery, vptree, rftwin::KnnBackend::VpTree)
    ->ArgsProduct({benchmark::CreateRange(256, 16384, 4), {5, 10, 15}});

void BM_KnnBuild(benchmark::State& state) {
  const auto points = delta_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rftwin::KnnIndex(points, rftwin::KnnBackend::VpTree).size());
}
BENCHMARK(BM_KnnBuild)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMillisecond);

void BM_OcsvmFit(benchmark::State& state) {
  const auto train = delta_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rftwin::ocsvm_fit(train).rho);
}
BENCHMARK(BM_OcsvmFit)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_LofFit(benchmark::State& state) {
  const auto train = delta_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rftwin::lof_fit(train, 100).k);
}
BENCHMARK(BM_LofFit)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  rftwin::ScenarioConfig c;
  c.sigma_shadow = 2;
  c.grid_size = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rftwin::generate(c, 1000, 1000, 0.5).train.size());
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_Generate)->Arg(5)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
