#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patentmap/corpus.hpp"
#include "patentmap/execution.hpp"
#include "patentmap/graph.hpp"
#include "patentmap/ipc_code.hpp"

namespace patentmap {

/// Jaccard index n_ij / (n_i + n_j - n_ij); zero when n_ij is zero.
/// Throws InvalidCounts unless n_i >= n_ij, n_j >= n_ij, n_i >= 1, n_j >= 1.
double jaccard(std::uint64_t n_i, std::uint64_t n_j, std::uint64_t n_ij);

struct CooccurrenceEdge {
  NodeId source = 0;
  NodeId target = 0;
  std::uint32_t cooccurrence = 0;  // N_ij
  std::uint32_t union_count = 0;   // N_i + N_j - N_ij, the Jaccard denominator
  double jaccard = 0.0;            // R_ij

  /// 1 / R_ij, computed from the exact ratio.
  double distance() const noexcept { return static_cast<double>(union_count) / cooccurrence; }
};

/// Weighted undirected IPC co-occurrence graph at one classification level.
///
/// Nodes are ordered by canonical code text, so node ids double as the
/// lexicographic order used for every deterministic tie-break. Edges have
/// source < target and are sorted by (source, target).
class CooccurrenceGraph {
 public:
  struct EdgeCount {
    NodeId source;
    NodeId target;
    std::uint32_t cooccurrence;
  };

  CooccurrenceGraph() = default;

  /// Validates every invariant: distinct sorted labels, N_i >= 1, no
  /// self-loops, 1 <= N_ij <= min(N_i, N_j). Jaccard values are derived.
  CooccurrenceGraph(IpcLevel level, std::vector<IpcCode> codes, std::vector<std::uint32_t> occurrence,
                    std::vector<EdgeCount> edges);

  IpcLevel level() const noexcept { return level_; }
  std::size_t node_count() const noexcept { return codes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return codes_.empty(); }

  const std::vector<IpcCode>& codes() const noexcept { return codes_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::uint32_t>& occurrence() const noexcept { return occurrence_; }
  const std::vector<CooccurrenceEdge>& edges() const noexcept { return edges_; }

  std::optional<NodeId> find(std::string_view label) const;
  const CooccurrenceEdge* find_edge(NodeId a, NodeId b) const;

  /// Topology with Jaccard weights.
  Graph similarity_graph() const;

  /// Same nodes, only the listed edges.
  CooccurrenceGraph with_edges(std::span<const std::size_t> edge_indices) const;

 private:
  IpcLevel level_ = IpcLevel::Subclass;
  std::vector<IpcCode> codes_;
  std::vector<std::string> labels_;
  std::vector<std::uint32_t> occurrence_;
  std::vector<CooccurrenceEdge> edges_;
};

/// Builds the co-occurrence graph at `level`.
///
/// N_i counts distinct patents carrying code i after truncation. Codes with
/// N_i >= min_occurrence become nodes, including ones without any partner.
/// N_ij counts patents carrying both retained codes. An empty graph is a
/// valid result; callers decide whether that is an error.
CooccurrenceGraph build_graph(const Corpus& corpus, IpcLevel level, int min_occurrence = 2,
                              Execution execution = Execution::Parallel);

/// Keeps edges with R_ij >= r_min. Node set and all counts are untouched.
CooccurrenceGraph threshold_edges(const CooccurrenceGraph& graph, double r_min = 0.05);

/// Same topology weighted by 1 / R_ij.
Graph to_distance_graph(const CooccurrenceGraph& graph);

struct PairCount {
  NodeId source;
  NodeId target;
  std::uint32_t count;
};

/// Counts unordered node pairs over baskets of strictly increasing node ids.
/// Output is sorted by (source, target). The parallel path uses per-thread
/// key buffers merged by sort; the serial path is a plain ordered map.
std::vector<PairCount> count_pairs(std::span<const std::vector<NodeId>> baskets,
                                   Execution execution = Execution::Parallel);

}  // namespace patentmap
