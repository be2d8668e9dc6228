#include <vector>

#include <benchmark/benchmark.h>

#include "smvt/builtins.hpp"
#include "smvt/quadrature.hpp"
#include "smvt/selector.hpp"
#include "smvt/taylor.hpp"

namespace b = smvt::builtins;

static void BM_SolveUni(benchmark::State& state) {
  const auto f = b::sine();
  const int n = static_cast<int>(state.range(0));
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smvt::solve_selector_uni(f, 0.5, x, n));
    x = x > 3.0 ? 0.3 : x + 0.01;
  }
}
BENCHMARK(BM_SolveUni)->Arg(1)->Arg(3);

static void BM_SolveMulti(benchmark::State& state) {
  const auto f = b::from_spec("sincos");
  const std::vector<double> a{0.1, 0.2}, x{0.9, -1.3};
  for (auto _ : state) benchmark::DoNotOptimize(smvt::solve_selector_multi(f, a, x, 2));
}
BENCHMARK(BM_SolveMulti);

static void BM_DirectionalPower(benchmark::State& state) {
  const auto f = b::exp_linear({0.5, -0.25, 1.0});
  const std::vector<double> pt{0.1, 0.2, -0.3}, h{0.7, 0.4, -0.5};
  const smvt::DirectionalPower power(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(power(f, pt, h));
}
BENCHMARK(BM_DirectionalPower)->Arg(2)->Arg(6);

static void BM_GaussLegendre(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(smvt::gauss_legendre(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GaussLegendre)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
