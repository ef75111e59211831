// Serial reference versus OpenMP kernels for the Monte-Carlo sweep.
#include <benchmark/benchmark.h>

#include "optocorr/estimators.hpp"
#include "optocorr/simulation.hpp"

namespace {

optocorr::ExperimentParams weak_signal() {
  optocorr::ExperimentParams p;
  p.drive_ratio = 0.03;
  return p;
}

void BM_SweepMomentsSerial(benchmark::State& state) {
  const auto params = weak_signal();
  for (auto _ : state) {
    auto m = optocorr::sweep_moments_serial(params, static_cast<std::size_t>(state.range(0)), 1);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepMomentsParallel(benchmark::State& state) {
  const auto params = weak_signal();
  for (auto _ : state) {
    auto m = optocorr::sweep_moments(params, static_cast<std::size_t>(state.range(0)), 1);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RecordMomentsSerial(benchmark::State& state) {
  const auto records = optocorr::run_sweep(weak_signal(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto m = optocorr::record_moments_serial(records);
    benchmark::DoNotOptimize(m.data());
  }
}

void BM_RecordMomentsParallel(benchmark::State& state) {
  const auto records = optocorr::run_sweep(weak_signal(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto m = optocorr::record_moments(records);
    benchmark::DoNotOptimize(m.data());
  }
}

}  // namespace

BENCHMARK(BM_SweepMomentsSerial)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepMomentsParallel)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecordMomentsSerial)->Arg(500)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RecordMomentsParallel)->Arg(500)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
