// Parallel vs serial replication harness on a calibration-scale week.
#include <benchmark/benchmark.h>

#include "scsp/simulator.hpp"

namespace {

const scsp::WeekInstance& week() {
  static const scsp::WeekInstance w = [] {
    std::mt19937_64 rng(7);
    return scsp::generate_week(scsp::GenParams{}, rng);
  }();
  return w;
}

void BM_Serial(benchmark::State& state) {
  scsp::ReplicationSource src = week();
  auto policy = scsp::ReactionPolicy::tuned_defaults();
  for (auto _ : state) {
    auto s = scsp::run_replications_serial(src, policy, scsp::UpdateStrategy::UP4,
                                           static_cast<int>(state.range(0)), 11);
    benchmark::DoNotOptimize(s.utilisation.mean);
  }
}

void BM_Parallel(benchmark::State& state) {
  scsp::ReplicationSource src = week();
  auto policy = scsp::ReactionPolicy::tuned_defaults();
  for (auto _ : state) {
    auto s = scsp::run_replications(src, policy, scsp::UpdateStrategy::UP4,
                                    static_cast<int>(state.range(0)), 11);
    benchmark::DoNotOptimize(s.utilisation.mean);
  }
}

BENCHMARK(BM_Serial)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
