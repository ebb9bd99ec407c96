#include "patentmap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patentmap/error.hpp"

namespace patentmap {

Graph::Graph(std::size_t node_count, std::vector<WeightedEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.source >= node_count_ || e.target >= node_count_) throw Error("edge endpoint out of range");
    if (e.source == e.target) throw Error("self-loop on node " + std::to_string(e.source));
    if (!std::isfinite(e.weight)) throw Error("non-finite edge weight");
    if (e.source > e.target) std::swap(e.source, e.target);
  }
  std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].source == edges_[i - 1].source && edges_[i].target == edges_[i - 1].target) {
      throw Error("duplicate edge " + std::to_string(edges_[i].source) + "-" + std::to_string(edges_[i].target));
    }
  }

  std::vector<std::size_t> degree(node_count_, 0);
  for (const auto& e : edges_) {
    ++degree[e.source];
    ++degree[e.target];
    total_weight_ += e.weight;
  }
  offsets_.assign(node_count_ + 1, 0);
  for (std::size_t v = 0; v < node_count_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted, so every neighbour list ends up in ascending node order.
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    adjacency_[cursor[e.source]++] = {e.target, e.weight, i};
  }
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    adjacency_[cursor[e.target]++] = {e.source, e.weight, i};
  }
  for (std::size_t v = 0; v < node_count_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

std::span<const Graph::Neighbor> Graph::neighbors(NodeId node) const {
  if (node >= node_count_) throw UnknownNode("node " + std::to_string(node) + " not in graph");
  return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

Graph Graph::edge_subgraph(std::span<const std::size_t> edge_indices) const {
  std::vector<WeightedEdge> kept;
  kept.reserve(edge_indices.size());
  for (std::size_t i : edge_indices) kept.push_back(edges_.at(i));
  return Graph(node_count_, std::move(kept));
}

}  // namespace patentmap
