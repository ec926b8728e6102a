#include <benchmark/benchmark.h>

#include <vector>

#include "einlab/boundary.hpp"
#include "einlab/curvature.hpp"
#include "einlab/green.hpp"
#include "einlab/linearized.hpp"
#include "einlab/metrics.hpp"

using namespace einlab;

static void BM_LocalGeometry(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = hyperbolic_ball_cartesian(n);
  std::vector<double> x(static_cast<std::size_t>(n), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(local_geometry(g, x, 2));
}
BENCHMARK(BM_LocalGeometry)->Arg(3)->Arg(4)->Arg(5);

static void BM_LinRicci(benchmark::State& state) {
  const Domain d = make_domain(state.range(0) == 0 ? "euclidean-ball" : "schwarzschild");
  const auto h = random_field(d, 1);
  const auto x = d.ctx.points().front();
  for (auto _ : state) benchmark::DoNotOptimize(lin_ricci(d.ctx, h, x));
}
BENCHMARK(BM_LinRicci)->Arg(0)->Arg(1);

static void BM_LinBoundary(benchmark::State& state) {
  const Domain d = make_domain("hyperbolic-ball");
  const auto sigma = d.boundary();
  const auto h = random_field(d, 2);
  const auto u = make_grid(d, 2).faces.at(0).nodes.front();
  for (auto _ : state) benchmark::DoNotOptimize(lin_boundary(sigma, h, u));
}
BENCHMARK(BM_LinBoundary);

BENCHMARK_MAIN();
