#include <benchmark/benchmark.h>

#include "tentlab/elliptic.hpp"
#include "tentlab/orlicz.hpp"

using namespace tentlab;

static void BM_AssembleAndDiagonalize1D(benchmark::State& state) {
  const Grid g(1, static_cast<int>(state.range(0)));
  const auto A = CoefficientField::identity(g);
  for (auto _ : state) {
    EllipticOperator op(g, A);
    benchmark::DoNotOptimize(op.max_abs_eigenvalue());
  }
}
BENCHMARK(BM_AssembleAndDiagonalize1D)->Arg(32)->Arg(64)->Arg(128);

static void BM_HeatApply(benchmark::State& state) {
  const Grid g(1, 64);
  EllipticOperator op(g, CoefficientField::identity(g));
  op.max_abs_eigenvalue();  // warm the spectral cache
  Vec f = Vec::Ones(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(op.heat_apply(0.01, f));
}
BENCHMARK(BM_HeatApply);

static void BM_LuxemburgNorm(benchmark::State& state) {
  const auto w = OrliczFunction::power_log(0.5, 1.0, 54.598150033144236);
  std::vector<double> vals(1024), wts(1024, 1.0 / 1024);
  for (size_t i = 0; i < vals.size(); ++i) vals[i] = 0.1 + (i % 97) * 0.05;
  for (auto _ : state)
    benchmark::DoNotOptimize(luxemburg_norm(vals, wts, w));
}
BENCHMARK(BM_LuxemburgNorm);

BENCHMARK_MAIN();
