#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "patentmap/cooccurrence.hpp"
#include "patentmap/execution.hpp"
#include "patentmap/graph.hpp"

namespace patentmap {

/// Incident edge count. Throws UnknownNode.
std::size_t degree(const Graph& graph, NodeId node);

/// Component labels are dense from 0, ordered by descending size and then by
/// smallest member id.
struct Components {
  std::vector<int> label;          // per node
  std::vector<std::size_t> sizes;  // per label
  std::size_t count() const noexcept { return sizes.size(); }
};

Components connected_components(const Graph& graph);

/// Brandes betweenness on an undirected graph.
///
/// Unweighted mode counts hops; weighted mode minimises summed edge weights
/// (ties within a relative 1e-12). Normalisation divides by (n-1)(n-2)/2
/// with n the total node count, also for disconnected graphs. Graphs with
/// n <= 2 give all zeros when normalised.
std::vector<double> betweenness_centrality(const Graph& graph, bool normalized = true, bool use_weights = false,
                                           Execution execution = Execution::Parallel);

/// Edge indices into the source graph's edges() plus their total weight.
struct SpanningForest {
  std::vector<std::size_t> edges;
  double total_weight = 0.0;
};

/// Kruskal over all edges sorted by weight; equal weights are taken in
/// (source, target) order, which for co-occurrence graphs is the canonical
/// code text order. Throws Error on non-positive weights.
SpanningForest minimum_spanning_forest(const Graph& distance_graph);

struct NodeMetrics {
  std::string code;
  std::uint32_t occurrence = 0;
  std::size_t degree = 0;
  double betweenness = 0.0;
  int modularity_class = -1;
  int component_id = -1;
};

/// One row per node, indexed by node id.
struct MetricsTable {
  std::vector<NodeMetrics> rows;
};

struct MetricsOptions {
  bool weighted_betweenness = false;
  Execution execution = Execution::Parallel;
};

/// Degree, betweenness and component ids on `graph`. Weighted betweenness
/// uses 1 / R_ij distances. `modularity_class` is copied from `communities`
/// when given (one label per node).
MetricsTable compute_metrics(const CooccurrenceGraph& graph, const std::vector<int>* communities = nullptr,
                             const MetricsOptions& options = {});

}  // namespace patentmap
