#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "wgqed/correlations.hpp"
#include "wgqed/random.hpp"

namespace {

using namespace wgqed;

constexpr std::uint64_t kSeed = 7;

void BM_ExactEvaluator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CorrelationEvaluator eval(ChainConfig::symmetric(n, 0.0125 * std::numbers::pi));
  std::vector<double> d(static_cast<std::size_t>(n));
  std::uint64_t i = 0;
  for (auto _ : state) {
    draw_detunings(kSeed, i++, 0.6, d);
    benchmark::DoNotOptimize(eval.evaluate(d, Output::transmission));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExactEvaluator)->Arg(2)->Arg(3)->Arg(4)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

void BM_NonInteractingEvaluator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NonInteractingEvaluator eval(ChainConfig::symmetric(n, 0.4 * std::numbers::pi));
  std::vector<double> d(static_cast<std::size_t>(n));
  std::uint64_t i = 0;
  for (auto _ : state) {
    draw_detunings(kSeed, i++, 50.0, d);
    benchmark::DoNotOptimize(eval.evaluate(d, Output::reflection));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NonInteractingEvaluator)->Arg(5)->Arg(10);

void BM_LogGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CorrelationEvaluator eval(ChainConfig::symmetric(n, 0.04 * std::numbers::pi));
  std::vector<double> d(static_cast<std::size_t>(n));
  std::uint64_t i = 0;
  for (auto _ : state) {
    draw_detunings(kSeed, i++, 0.2, d);
    benchmark::DoNotOptimize(eval.log_g_gradient(d, Output::transmission));
  }
}
BENCHMARK(BM_LogGradient)->Arg(3)->Arg(6);

void BM_CleanChiralChain(benchmark::State& state) {
  const ChainConfig cfg{static_cast<int>(state.range(0)), 0.0, 1.0, 0.0, 1.0 / 0.0083 - 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(g_clean(cfg, Output::transmission));
}
BENCHMARK(BM_CleanChiralChain)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
