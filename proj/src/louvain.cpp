#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "patentmap/community.hpp"
#include "patentmap/error.hpp"

namespace patentmap {

namespace {

// Unbiased draw in [0, bound) straight from the engine output, so the
// sequence is the same on every standard library.
std::uint64_t draw_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

void shuffle(std::vector<std::size_t>& items, std::mt19937_64& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[draw_below(engine, i)]);
  }
}

// Graph of one aggregation level. `loop` holds the weight of edges folded
// inside a super-node; it contributes 2 * loop to the node strength.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
  std::vector<double> loop;
  std::vector<double> strength;

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph from_graph(const Graph& graph) {
  LevelGraph level;
  const std::size_t n = graph.node_count();
  level.adjacency.resize(n);
  level.loop.assign(n, 0.0);
  level.strength.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& nb : graph.neighbors(static_cast<NodeId>(v))) {
      level.adjacency[v].emplace_back(nb.node, nb.weight);
      level.strength[v] += nb.weight;
    }
  }
  return level;
}

// Local moving phase. Returns true when any node changed community.
bool move_nodes(const LevelGraph& g, std::vector<std::size_t>& community, double resolution, double two_m,
                std::mt19937_64& engine) {
  const std::size_t n = g.size();
  std::vector<double> total(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) total[community[v]] += g.strength[v];

  std::vector<double> link(n, 0.0);
  std::vector<char> is_touched(n, 0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  constexpr double kMinGain = 1e-12;

  bool any_move = false;
  for (bool moved = true; moved;) {
    moved = false;
    shuffle(order, engine);
    for (std::size_t v : order) {
      const std::size_t current = community[v];
      for (const auto& [u, w] : g.adjacency[v]) {
        const std::size_t c = community[u];
        if (!is_touched[c]) {
          is_touched[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      total[current] -= g.strength[v];
      const double scale = resolution * g.strength[v] / two_m;
      std::size_t best = current;
      double best_gain = link[current] - total[current] * scale;
      for (std::size_t c : touched) {
        const double gain = link[c] - total[c] * scale;
        if (gain > best_gain + kMinGain) {
          best = c;
          best_gain = gain;
        }
      }
      total[best] += g.strength[v];
      for (std::size_t c : touched) {
        link[c] = 0.0;
        is_touched[c] = 0;
      }
      touched.clear();
      if (best != current) {
        community[v] = best;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// Collapses communities into super-nodes; `community` is renumbered densely
// in order of first appearance.
LevelGraph aggregate(const LevelGraph& g, std::vector<std::size_t>& community) {
  std::vector<std::size_t> dense(g.size(), g.size());
  std::size_t count = 0;
  for (auto& c : community) {
    if (dense[c] == g.size()) dense[c] = count++;
    c = dense[c];
  }
  LevelGraph next;
  next.adjacency.resize(count);
  next.loop.assign(count, 0.0);
  next.strength.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> links(count);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::size_t cv = community[v];
    next.loop[cv] += g.loop[v];
    next.strength[cv] += g.strength[v];
    for (const auto& [u, w] : g.adjacency[v]) {
      const std::size_t cu = community[u];
      if (cu == cv) {
        if (v < u) next.loop[cv] += w;
      } else {
        links[cv][cu] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    next.adjacency[c].assign(links[c].begin(), links[c].end());
  }
  return next;
}

}  // namespace

std::size_t Partition::community_count() const {
  if (label.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(label.begin(), label.end()) + 1);
}

Partition canonical_partition(const std::vector<int>& labels) {
  std::map<int, std::pair<std::size_t, std::size_t>> info;  // label -> (size, first member)
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = info.try_emplace(labels[v], 0, v);
    ++it->second.first;
  }
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> order(info.begin(), info.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::map<int, int> relabel;
  for (std::size_t i = 0; i < order.size(); ++i) relabel[order[i].first] = static_cast<int>(i);
  Partition out;
  out.label.reserve(labels.size());
  for (int l : labels) out.label.push_back(relabel[l]);
  return out;
}

double modularity(const Graph& graph, const Partition& partition, double resolution) {
  const std::size_t n = graph.node_count();
  if (partition.label.size() != n) throw PartitionMismatch("partition size differs from node count");
  for (int l : partition.label) {
    if (l < 0) throw PartitionMismatch("negative community label");
  }
  const double m = graph.total_weight();
  if (m == 0.0) return 0.0;
  std::map<int, std::pair<double, double>> sums;  // label -> (internal, total)
  for (const auto& e : graph.edges()) {
    const int a = partition.label[e.source];
    const int b = partition.label[e.target];
    sums[a].second += e.weight;
    sums[b].second += e.weight;
    if (a == b) sums[a].first += 2.0 * e.weight;
  }
  double q = 0.0;
  for (const auto& [label, s] : sums) {
    const double share = s.second / (2.0 * m);
    q += s.first / (2.0 * m) - resolution * share * share;
  }
  return q;
}

LouvainResult louvain_communities(const Graph& graph, double resolution, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw Error("community detection needs at least one node");
  for (const auto& e : graph.edges()) {
    if (e.weight < 0.0) throw Error("community detection needs non-negative weights");
  }

  std::vector<int> membership(n);
  std::iota(membership.begin(), membership.end(), 0);
  LouvainResult result;
  const double two_m = 2.0 * graph.total_weight();
  if (two_m > 0.0) {
    std::mt19937_64 engine(seed);
    LevelGraph level = from_graph(graph);
    for (;;) {
      std::vector<std::size_t> community(level.size());
      std::iota(community.begin(), community.end(), 0);
      if (!move_nodes(level, community, resolution, two_m, engine)) break;
      level = aggregate(level, community);
      for (auto& m : membership) m = static_cast<int>(community[static_cast<std::size_t>(m)]);
      result.level_modularity.push_back(modularity(graph, canonical_partition(membership), resolution));
    }
  }
  result.partition = canonical_partition(membership);
  result.modularity = modularity(graph, result.partition, resolution);
  return result;
}

}  // namespace patentmap
