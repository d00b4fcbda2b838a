#include <benchmark/benchmark.h>

#include "zero_atlas/empirics.hpp"
#include "zero_atlas/potential.hpp"

using namespace zero_atlas;

namespace {

void BM_ConjugateGrid(benchmark::State& state) {
  const RadialProfile p = RadialProfile::named(ProfileKind::hyperbolic, 0.5);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conjugate(p, -3.0, -0.1, h));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(2.9 / h));
}
BENCHMARK(BM_ConjugateGrid)->Arg(100)->Arg(1000)->Arg(10000);

RandomFunctionInstance weyl(long n) {
  const CoefficientSchedule s = coefficients(RadialProfile::named(ProfileKind::lo_poly, 0.5), n, 0);
  return instantiate(s, make_noise(NoiseKind::complex_gaussian), 1729, 1.0);
}

void BM_Evaluate(benchmark::State& state) {
  const RandomFunctionInstance inst = weyl(state.range(0));
  const std::complex<double> z(0.6, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(inst, z));
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(1000);

void BM_FindRoots(benchmark::State& state) {
  const RandomFunctionInstance inst = weyl(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(inst));
}
BENCHMARK(BM_FindRoots)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_PotentialQuadrature(benchmark::State& state) {
  const TruncatedLaw tl(RadialProfile::named(ProfileKind::lo_poly, 0.5), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(potential_quadrature(tl, {0.5, 0.2}));
}
BENCHMARK(BM_PotentialQuadrature)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
