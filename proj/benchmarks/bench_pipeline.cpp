#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "srcartan/commands.hpp"
#include "srcartan/connection.hpp"
#include "srcartan/contact.hpp"
#include "srcartan/spec_file.hpp"

using namespace srcartan;

namespace {

SpecDocument load(const char* name) {
  return load_spec_document(std::string(SRCARTAN_DATA_DIR) + "/" + name);
}

const char* const kSpecs[] = {"heisenberg.json", "nonflat.json", "r5_1114.json"};

}  // namespace

static void BM_AdaptedCoframe(benchmark::State& state) {
  const SpecDocument doc = load(kSpecs[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(adapted_coframe(doc.spec, doc.points, 1e-9).dim());
  state.SetLabel(doc.spec.name);
}
BENCHMARK(BM_AdaptedCoframe)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_Reduce(benchmark::State& state) {
  const SpecDocument doc = load(kSpecs[state.range(0)]);
  const Reducer red(adapted_coframe(doc.spec, doc.points, 1e-9), {});
  const auto& p = doc.points[doc.points.size() / 2];
  for (auto _ : state) benchmark::DoNotOptimize(red.reduce(p).mu);
  state.SetLabel(doc.spec.name);
}
BENCHMARK(BM_Reduce)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_PointInvariants(benchmark::State& state) {
  const SpecDocument doc = load(kSpecs[state.range(0)]);
  const Reducer red(adapted_coframe(doc.spec, doc.points, 1e-9), {});
  const ComplementModel model = invariant_complement(red.n());
  const auto& p = doc.points[doc.points.size() / 2];
  for (auto _ : state) benchmark::DoNotOptimize(point_invariants(red, model, p).curvature.components);
  state.SetLabel(doc.spec.name);
}
BENCHMARK(BM_PointInvariants)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_InvariantReport(benchmark::State& state) {
  const SpecDocument doc = load(kSpecs[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(compute_invariants(doc, {}).rows.size());
  state.SetLabel(doc.spec.name + ", " + std::to_string(doc.points.size()) + " points");
}
BENCHMARK(BM_InvariantReport)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_AssociatedSearch(benchmark::State& state) {
  const SpecDocument doc = load(kSpecs[state.range(0)]);
  const CoframeField cf = adapted_coframe(doc.spec, doc.points, 1e-9);
  for (auto _ : state) benchmark::DoNotOptimize(search_associated_form(cf, doc.points, 1e-9).exists);
  state.SetLabel(doc.spec.name);
}
BENCHMARK(BM_AssociatedSearch)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_SymbolicInverseR5(benchmark::State& state) {
  const SpecDocument doc = load("r5_1114.json");
  const CoframeField cf = adapted_coframe(doc.spec, doc.points, 1e-9);
  std::vector<std::vector<sym::Expr>> m;
  for (const auto& f : cf.forms) m.push_back(f.coeffs);
  for (auto _ : state) benchmark::DoNotOptimize(symbolic_inverse(m, doc.points, 1e-9).size());
}
BENCHMARK(BM_SymbolicInverseR5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
