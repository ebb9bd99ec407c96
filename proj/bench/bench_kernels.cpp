// Serial vs OpenMP kernels on synthetic inputs.
#include <algorithm>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "patentmap/cooccurrence.hpp"
#include "patentmap/layout.hpp"
#include "patentmap/metrics.hpp"

namespace {

using namespace patentmap;

std::vector<std::vector<NodeId>> random_baskets(std::size_t patents, NodeId codes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<NodeId> code(0, codes - 1);
  std::vector<std::vector<NodeId>> baskets(patents);
  for (auto& b : baskets) {
    const int k = size(rng);
    for (int i = 0; i < k; ++i) b.push_back(code(rng));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  return baskets;
}

Graph random_graph(NodeId n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<WeightedEdge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.push_back({i, j, weight(rng)});
    }
  }
  return Graph(n, std::move(edges));
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_CountPairs(benchmark::State& state) {
  const auto baskets = random_baskets(10000, 500, 7);
  for (auto _ : state) benchmark::DoNotOptimize(count_pairs(baskets, mode(state)));
}
BENCHMARK(BM_CountPairs)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Betweenness(benchmark::State& state) {
  const Graph g = random_graph(500, 0.02, 11);
  const bool weighted = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(betweenness_centrality(g, true, weighted, mode(state)));
}
BENCHMARK(BM_Betweenness)->ArgsProduct({{0, 1}, {0, 1}})->ArgNames({"parallel", "weighted"})
    ->Unit(benchmark::kMillisecond);

void BM_ForceAtlas2(benchmark::State& state) {
  const Graph g = random_graph(500, 0.02, 13);
  LayoutParams params;
  params.iterations = 50;
  for (auto _ : state) benchmark::DoNotOptimize(force_atlas2(g, params, {}, mode(state)));
}
BENCHMARK(BM_ForceAtlas2)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
