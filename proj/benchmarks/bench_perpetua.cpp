#include <benchmark/benchmark.h>

#include "perpetua/catalog.hpp"
#include "perpetua/kappa_analysis.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/montecarlo.hpp"

using namespace perpetua;

namespace {

const char* kEntries[] = {"stable:alpha=0.5", "expcp:c=1", "geomcp:c=0.1,q=0.5", "gamma",
                          "rou:alpha=0.3,mu=1"};

void BM_R_product(benchmark::State& state) {
  const CatalogEntry e = make_entry(kEntries[state.range(0)]);
  state.SetLabel(e.id);
  for (auto _ : state) benchmark::DoNotOptimize(R_product(e.function, 2.5).value);
}
BENCHMARK(BM_R_product)->DenseRange(0, 4);

void BM_I_product(benchmark::State& state) {
  const CatalogEntry e = make_entry(kEntries[state.range(0)]);
  state.SetLabel(e.id);
  for (auto _ : state) benchmark::DoNotOptimize(I_product(e.function, 2.5).value);
}
BENCHMARK(BM_I_product)->DenseRange(0, 4);

void BM_R_integral(benchmark::State& state) {
  const CatalogEntry e = make_entry(kEntries[state.range(0)]);
  state.SetLabel(e.id);
  for (auto _ : state) {
    benchmark::DoNotOptimize(R_integral(e.function, *e.closed_kappa, 2.5).value);
  }
}
BENCHMARK(BM_R_integral)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_classify(benchmark::State& state) {
  const CatalogEntry e = make_entry(kEntries[state.range(0)]);
  state.SetLabel(e.id);
  for (auto _ : state) benchmark::DoNotOptimize(classify(e).i_mid);
}
BENCHMARK(BM_classify)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_sample_perpetuity(benchmark::State& state) {
  const CatalogEntry e = make_entry(kEntries[state.range(0)]);
  const mc::SubordinatorModel m = mc::model_for(e);
  const double dl = 1e-3;
  const double L = mc::default_horizon(e.function, dl);
  state.SetLabel(e.id);
  std::uint64_t i = 0;
  for (auto _ : state) {
    mc::Rng rng = mc::substream(1, i++);
    benchmark::DoNotOptimize(mc::sample_perpetuity(m, dl, L, rng));
  }
}
BENCHMARK(BM_sample_perpetuity)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
