#include "patentmap/cooccurrence.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "patentmap/error.hpp"

namespace patentmap {

double jaccard(std::uint64_t n_i, std::uint64_t n_j, std::uint64_t n_ij) {
  if (n_i < 1 || n_j < 1 || n_ij > n_i || n_ij > n_j) {
    throw InvalidCounts("invalid co-occurrence counts (" + std::to_string(n_i) + ", " + std::to_string(n_j) +
                        ", " + std::to_string(n_ij) + ")");
  }
  if (n_ij == 0) return 0.0;
  return static_cast<double>(n_ij) / static_cast<double>(n_i + n_j - n_ij);
}

CooccurrenceGraph::CooccurrenceGraph(IpcLevel level, std::vector<IpcCode> codes,
                                     std::vector<std::uint32_t> occurrence, std::vector<EdgeCount> edges)
    : level_(level), codes_(std::move(codes)), occurrence_(std::move(occurrence)) {
  if (codes_.size() != occurrence_.size()) throw Error("codes and occurrence counts differ in length");
  labels_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    labels_.push_back(format_ipc_code(codes_[i], level_));
    if (codes_[i].level() != level_) throw Error("code " + labels_.back() + " is not at the graph level");
    if (occurrence_[i] < 1) throw Error("node " + labels_.back() + " has zero occurrences");
    if (i > 0 && !(labels_[i - 1] < labels_[i])) throw Error("node labels must be unique and sorted");
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeCount& a, const EdgeCount& b) {
    const auto ka = std::minmax(a.source, a.target);
    const auto kb = std::minmax(b.source, b.target);
    return ka < kb;
  });
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    auto [s, t] = std::minmax(e.source, e.target);
    if (t >= codes_.size()) throw Error("edge endpoint out of range");
    if (s == t) throw Error("self-loop on " + labels_[s]);
    if (!edges_.empty() && edges_.back().source == s && edges_.back().target == t) {
      throw Error("duplicate edge " + labels_[s] + " - " + labels_[t]);
    }
    const std::uint32_t n_i = occurrence_[s];
    const std::uint32_t n_j = occurrence_[t];
    if (e.cooccurrence < 1 || e.cooccurrence > std::min(n_i, n_j)) {
      throw InvalidCounts("edge " + labels_[s] + " - " + labels_[t] + " has N_ij outside [1, min(N_i, N_j)]");
    }
    CooccurrenceEdge edge;
    edge.source = s;
    edge.target = t;
    edge.cooccurrence = e.cooccurrence;
    edge.union_count = n_i + n_j - e.cooccurrence;
    edge.jaccard = jaccard(n_i, n_j, e.cooccurrence);
    edges_.push_back(edge);
  }
}

std::optional<NodeId> CooccurrenceGraph::find(std::string_view label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<NodeId>(it - labels_.begin());
}

const CooccurrenceEdge* CooccurrenceGraph::find_edge(NodeId a, NodeId b) const {
  const auto [s, t] = std::minmax(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{s, t},
                                   [](const CooccurrenceEdge& e, const std::pair<NodeId, NodeId>& key) {
                                     return std::pair{e.source, e.target} < key;
                                   });
  if (it == edges_.end() || it->source != s || it->target != t) return nullptr;
  return &*it;
}

Graph CooccurrenceGraph::similarity_graph() const {
  std::vector<WeightedEdge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({e.source, e.target, e.jaccard});
  return Graph(node_count(), std::move(out));
}

CooccurrenceGraph CooccurrenceGraph::with_edges(std::span<const std::size_t> edge_indices) const {
  CooccurrenceGraph out;
  out.level_ = level_;
  out.codes_ = codes_;
  out.labels_ = labels_;
  out.occurrence_ = occurrence_;
  std::vector<std::size_t> sorted(edge_indices.begin(), edge_indices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  out.edges_.reserve(sorted.size());
  for (std::size_t i : sorted) out.edges_.push_back(edges_.at(i));
  return out;
}

std::vector<PairCount> count_pairs(std::span<const std::vector<NodeId>> baskets, Execution execution) {
  std::vector<PairCount> out;
  if (execution == Execution::Serial) {
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> counts;
    for (const auto& basket : baskets) {
      for (std::size_t a = 0; a < basket.size(); ++a) {
        for (std::size_t b = a + 1; b < basket.size(); ++b) ++counts[{basket[a], basket[b]}];
      }
    }
    out.reserve(counts.size());
    for (const auto& [key, count] : counts) out.push_back({key.first, key.second, count});
    return out;
  }

  // Pair (s, t) packed into one key; ordering of keys equals (s, t) ordering.
  std::vector<std::uint64_t> keys;
  const auto basket_count = static_cast<std::ptrdiff_t>(baskets.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < basket_count; ++i) {
      const auto& basket = baskets[static_cast<std::size_t>(i)];
      for (std::size_t a = 0; a < basket.size(); ++a) {
        for (std::size_t b = a + 1; b < basket.size(); ++b) {
          local.push_back((static_cast<std::uint64_t>(basket[a]) << 32) | basket[b]);
        }
      }
    }
#pragma omp critical(patentmap_count_pairs)
    keys.insert(keys.end(), local.begin(), local.end());
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    out.push_back({static_cast<NodeId>(keys[i] >> 32), static_cast<NodeId>(keys[i] & 0xffffffffu),
                   static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return out;
}

CooccurrenceGraph build_graph(const Corpus& corpus, IpcLevel level, int min_occurrence, Execution execution) {
  if (min_occurrence < 1) throw Error("min_occurrence must be at least 1");

  std::vector<std::vector<IpcCode>> per_record;
  per_record.reserve(corpus.size());
  std::map<std::string, std::pair<IpcCode, std::uint32_t>> counts;
  for (const auto& record : corpus.records) {
    per_record.push_back(codes_at_level(record, level));
    for (const auto& code : per_record.back()) {
      auto [it, inserted] = counts.try_emplace(format_ipc_code(code, level), code, 0u);
      ++it->second.second;
    }
  }

  std::vector<IpcCode> codes;
  std::vector<std::uint32_t> occurrence;
  std::unordered_map<std::string, NodeId> index;
  for (const auto& [label, entry] : counts) {
    if (entry.second < static_cast<std::uint32_t>(min_occurrence)) continue;
    index.emplace(label, static_cast<NodeId>(codes.size()));
    codes.push_back(entry.first);
    occurrence.push_back(entry.second);
  }

  // Record codes are sorted by label, so retained ids come out increasing.
  std::vector<std::vector<NodeId>> baskets;
  baskets.reserve(per_record.size());
  for (const auto& record_codes : per_record) {
    std::vector<NodeId> basket;
    for (const auto& code : record_codes) {
      const auto it = index.find(format_ipc_code(code, level));
      if (it != index.end()) basket.push_back(it->second);
    }
    if (basket.size() > 1) baskets.push_back(std::move(basket));
  }

  std::vector<CooccurrenceGraph::EdgeCount> edges;
  for (const auto& pair : count_pairs(baskets, execution)) {
    edges.push_back({pair.source, pair.target, pair.count});
  }
  return CooccurrenceGraph(level, std::move(codes), std::move(occurrence), std::move(edges));
}

CooccurrenceGraph threshold_edges(const CooccurrenceGraph& graph, double r_min) {
  if (!(r_min >= 0.0 && r_min <= 1.0)) throw Error("Jaccard threshold must lie in [0, 1]");
  std::vector<std::size_t> kept;
  const auto& edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].jaccard >= r_min) kept.push_back(i);
  }
  return graph.with_edges(kept);
}

Graph to_distance_graph(const CooccurrenceGraph& graph) {
  std::vector<WeightedEdge> out;
  out.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) out.push_back({e.source, e.target, e.distance()});
  return Graph(graph.node_count(), std::move(out));
}

}  // namespace patentmap
