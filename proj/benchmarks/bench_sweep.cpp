#include <benchmark/benchmark.h>

#include "einlab/schwarzschild.hpp"

using namespace einlab;

static void BM_SweepPoint(benchmark::State& state) {
  const auto p = make_params(static_cast<int>(state.range(0)), -0.2, 1.0);
  const double s = 2.0 * roots(p).r0;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_point(p, s));
}
BENCHMARK(BM_SweepPoint)->Arg(4)->Arg(6);

static void BM_DesingInverse(benchmark::State& state) {
  const auto d = desing(make_params(4, 0.02, 1.0));
  double u = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.r_of_F(u));
    u = u < 1.0 ? u * 1.7 : 1e-6;
  }
}
BENCHMARK(BM_DesingInverse);

BENCHMARK_MAIN();
