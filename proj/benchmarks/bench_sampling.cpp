#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "wgqed/montecarlo.hpp"
#include "wgqed/pdf_estimate.hpp"
#include "wgqed/random.hpp"

namespace {

using namespace wgqed;

void BM_DrawDetunings(benchmark::State& state) {
  std::vector<double> d(static_cast<std::size_t>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) {
    draw_detunings(3, i++, 1.0, d);
    benchmark::DoNotOptimize(d.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawDetunings)->Arg(1)->Arg(4)->Arg(10);

void BM_HistogramAdd(benchmark::State& state) {
  PdfEstimate h;
  std::vector<double> values(4096);
  draw_detunings(5, 0, 3.0, values);
  for (auto& v : values) v = std::exp(v);
  std::size_t i = 0;
  for (auto _ : state) {
    h.add_value(values[i++ & 4095]);
  }
  benchmark::DoNotOptimize(h.total());
}
BENCHMARK(BM_HistogramAdd);

void BM_EstimatePdf(benchmark::State& state) {
  McConfig mc;
  mc.realizations = 20000;
  mc.disorder_std = 0.6;
  const auto cfg = ChainConfig::symmetric(static_cast<int>(state.range(0)), 0.04);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_pdf(cfg, mc, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc.realizations));
}
BENCHMARK(BM_EstimatePdf)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
