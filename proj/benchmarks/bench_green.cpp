#include <benchmark/benchmark.h>

#include "einlab/green.hpp"

using namespace einlab;

static void BM_GreenResidual(benchmark::State& state) {
  const Domain d = make_domain("euclidean-annulus");
  const auto h = random_field(d, 7), w = random_field(d, 8);
  const auto grid = make_grid(d, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(green_residual(d.ctx, h, w, grid));
}
BENCHMARK(BM_GreenResidual)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_Lbar(benchmark::State& state) {
  const Domain d = make_domain("euclidean-ball");
  const auto h = trivial_kernel(d, 5);
  const auto grid = make_grid(d, 3);
  for (auto _ : state) benchmark::DoNotOptimize(lbar_components(d.ctx, h, 0.0, grid));
}
BENCHMARK(BM_Lbar)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
