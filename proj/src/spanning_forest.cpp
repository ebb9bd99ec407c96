#include <algorithm>
#include <numeric>

#include "patentmap/error.hpp"
#include "patentmap/metrics.hpp"

namespace patentmap {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

}  // namespace

SpanningForest minimum_spanning_forest(const Graph& distance_graph) {
  const auto edges = distance_graph.edges();
  for (const auto& e : edges) {
    if (!(e.weight > 0.0)) throw Error("spanning forest needs positive finite edge weights");
  }
  // Edges are already in (source, target) order; a stable sort by weight keeps
  // that order among ties.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a].weight < edges[b].weight; });

  DisjointSets sets(distance_graph.node_count());
  SpanningForest forest;
  for (std::size_t i : order) {
    if (sets.unite(edges[i].source, edges[i].target)) {
      forest.edges.push_back(i);
      forest.total_weight += edges[i].weight;
    }
  }
  std::sort(forest.edges.begin(), forest.edges.end());
  return forest;
}

MetricsTable compute_metrics(const CooccurrenceGraph& graph, const std::vector<int>* communities,
                             const MetricsOptions& options) {
  if (communities && communities->size() != graph.node_count()) {
    throw PartitionMismatch("community labels do not cover the graph");
  }
  const Graph topology =
      options.weighted_betweenness ? to_distance_graph(graph) : graph.similarity_graph();
  const auto betweenness = betweenness_centrality(topology, true, options.weighted_betweenness, options.execution);
  const auto components = connected_components(topology);

  MetricsTable table;
  table.rows.resize(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    auto& row = table.rows[v];
    row.code = graph.labels()[v];
    row.occurrence = graph.occurrence()[v];
    row.degree = topology.degree(v);
    row.betweenness = betweenness[v];
    row.modularity_class = communities ? (*communities)[v] : -1;
    row.component_id = components.label[v];
  }
  return table;
}

}  // namespace patentmap
