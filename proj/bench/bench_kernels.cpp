// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "flex/kernels.hpp"
#include "flex/noise.hpp"

namespace {

using namespace flex;

void BM_McStatsSerial(benchmark::State& state) {
  const AnsParams p{-0.5, 8, 64, 0};
  const auto chunks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::mc_stats(p, chunks));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_McStatsOmp(benchmark::State& state) {
  const AnsParams p{-0.5, 8, 64, 0};
  const auto chunks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::mc_stats(p, chunks));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

MatrixD make_series(std::size_t length) {
  RngStream rng(0, 0);
  return sample_series(-0.5, length, 4, rng);
}

// The direct DFT is quadratic in the segment length, so keep segments modest.
void BM_PeriodogramSerial(benchmark::State& state) {
  const auto series = make_series(16384);
  const auto seg = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::periodogram(series, seg));
}

void BM_PeriodogramOmp(benchmark::State& state) {
  const auto series = make_series(16384);
  const auto seg = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::periodogram(series, seg));
}

}  // namespace

BENCHMARK(BM_McStatsSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McStatsOmp)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodogramSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodogramOmp)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
