// Serial reference paths against the OpenMP kernels.
//   ./astroknn_bench --benchmark_filter=Rank
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "astroknn/coordination.hpp"
#include "astroknn/predictor.hpp"

using namespace astroknn;

namespace {

const SwarmLayout& layout116() {
  static const SwarmLayout l = build_hex_swarm(6, 116, 22.4, 11.2, 11.2);
  return l;
}

// Labels do not affect ranking cost, so random targets stand in for a
// simulated train split.
std::vector<Configuration> random_split(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Configuration> out(count);
  for (auto& c : out) {
    for (const auto& a : layout116().astrobots()) c.targets.push_back(sample_target(a, rng));
    c.ground_truth = Labels(layout116().size(), 1);
  }
  return out;
}

void BM_RankNeighborhoods(benchmark::State& state, Exec exec) {
  const TrainingSet train(random_split(static_cast<std::size_t>(state.range(0)), 1));
  const Configuration test = random_split(1, 2).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_neighborhoods(layout116(), train, test, 51, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_RankNeighborhoods, serial, Exec::serial)->Arg(1000)->Arg(10049)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RankNeighborhoods, parallel, Exec::parallel)->Arg(1000)->Arg(10049)->Unit(benchmark::kMillisecond);

void BM_GenerateDataset(benchmark::State& state, Exec exec) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_dataset(layout116(), count, SimParams{}, 1, std::nullopt, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_GenerateDataset, serial, Exec::serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GenerateDataset, parallel, Exec::parallel)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
