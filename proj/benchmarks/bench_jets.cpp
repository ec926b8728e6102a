#include <benchmark/benchmark.h>

#include "einlab/jet.hpp"

using einlab::Jet;

static void BM_JetMultiply(benchmark::State& state) {
  const int nvar = static_cast<int>(state.range(0));
  const Jet x = Jet::variable(nvar, 3, 0, 0.3);
  const Jet y = Jet::variable(nvar, 3, nvar - 1, 1.7);
  Jet a = sin(x) + y;
  for (auto _ : state) {
    Jet b = a * (x + y);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_JetMultiply)->Arg(2)->Arg(4)->Arg(6);

static void BM_JetCompose(benchmark::State& state) {
  const int nvar = static_cast<int>(state.range(0));
  const Jet x = Jet::variable(nvar, 3, 0, 0.3) + Jet::variable(nvar, 3, 1, 0.2);
  for (auto _ : state) {
    Jet r = sqrt(exp(x)) * reciprocal(1.0 + x * x);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_JetCompose)->Arg(3)->Arg(6);

BENCHMARK_MAIN();
