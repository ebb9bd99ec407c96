#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace patentmap {

using NodeId = std::uint32_t;

struct WeightedEdge {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 1.0;
};

/// Simple undirected weighted graph with nodes 0..n-1.
///
/// Edges are stored with source < target and sorted by (source, target);
/// edge indices refer to that order. Adjacency is kept in CSR form.
class Graph {
 public:
  struct Neighbor {
    NodeId node;
    double weight;
    std::uint32_t edge;
  };

  Graph() = default;

  /// Throws Error on self-loops, duplicate pairs, out-of-range endpoints or
  /// non-finite weights.
  Graph(std::size_t node_count, std::vector<WeightedEdge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const WeightedEdge> edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(NodeId node) const;
  std::size_t degree(NodeId node) const { return neighbors(node).size(); }
  double total_weight() const noexcept { return total_weight_; }

  /// Same nodes, only the listed edges (indices into edges()).
  Graph edge_subgraph(std::span<const std::size_t> edge_indices) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<WeightedEdge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  double total_weight_ = 0.0;
};

}  // namespace patentmap
