#include <benchmark/benchmark.h>

#include "srcartan/connection.hpp"
#include "srcartan/gstruct.hpp"

using namespace srcartan;

static void BM_OrbitSpace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_orbit_space(n, Level::kG).dim());
}
BENCHMARK(BM_OrbitSpace)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_AmapKernelG2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QMatrix a = amap_matrix(build_lie_algebra(n, Level::kG2));
  for (auto _ : state) benchmark::DoNotOptimize(linalg::kernel(a).dim());
}
BENCHMARK(BM_AmapKernelG2)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_InvariantComplement(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(invariant_complement(n).gamma_dim());
}
BENCHMARK(BM_InvariantComplement)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);
