#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "patentmap/graph.hpp"

namespace patentmap {

/// Community label per node, dense from 0.
struct Partition {
  std::vector<int> label;

  std::size_t community_count() const;
};

/// Relabels so that communities are numbered by descending size, ties broken
/// by smallest member id.
Partition canonical_partition(const std::vector<int>& labels);

/// Weighted Newman-Girvan modularity with a resolution multiplier on the
/// null-model term:
///   Q = sum_c [ in_c / 2m - resolution * (tot_c / 2m)^2 ]
/// Graphs without edges have Q = 0. Throws PartitionMismatch when the
/// partition does not label every node with a non-negative label.
double modularity(const Graph& graph, const Partition& partition, double resolution = 1.0);

struct LouvainResult {
  Partition partition;
  double modularity = 0.0;
  /// Modularity of the flattened partition after each aggregation level.
  std::vector<double> level_modularity;
};

/// Multi-level Louvain optimisation on the edge weights of `graph`.
///
/// Each level repeats local moves until no node changes community, then
/// collapses communities into super-nodes. The node sweep order of every
/// pass is a permutation drawn from `seed`; identical inputs give identical
/// output. Isolated nodes stay singletons. Throws Error on an empty graph or
/// negative weights.
LouvainResult louvain_communities(const Graph& graph, double resolution = 1.0, std::uint64_t seed = 1);

}  // namespace patentmap
