#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>

#include "patentmap/error.hpp"
#include "patentmap/metrics.hpp"

namespace patentmap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelativeTieTolerance = 1e-12;

bool same_length(double a, double b) {
  return std::fabs(a - b) <= kRelativeTieTolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Scratch space for one single-source pass.
struct Workspace {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeId> order;  // nodes in non-decreasing distance
  std::vector<char> settled;

  explicit Workspace(std::size_t n) : dist(n), sigma(n), delta(n), settled(n) { order.reserve(n); }
};

// Writes the dependency of `source` on every node into `out` (size n).
void single_source(const Graph& graph, NodeId source, bool use_weights, Workspace& ws, std::span<double> out) {
  std::fill(ws.dist.begin(), ws.dist.end(), kInf);
  std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
  std::fill(ws.delta.begin(), ws.delta.end(), 0.0);
  std::fill(ws.settled.begin(), ws.settled.end(), 0);
  ws.order.clear();
  ws.dist[source] = 0.0;
  ws.sigma[source] = 1.0;

  const auto is_pred = [&](NodeId v, double weight, NodeId w) {
    return use_weights ? same_length(ws.dist[v] + weight, ws.dist[w]) : ws.dist[v] + 1.0 == ws.dist[w];
  };

  if (!use_weights) {
    std::size_t head = 0;
    ws.order.push_back(source);
    while (head < ws.order.size()) {
      const NodeId v = ws.order[head++];
      for (const auto& nb : graph.neighbors(v)) {
        if (ws.dist[nb.node] == kInf) {
          ws.dist[nb.node] = ws.dist[v] + 1.0;
          ws.order.push_back(nb.node);
        }
        if (ws.dist[nb.node] == ws.dist[v] + 1.0) ws.sigma[nb.node] += ws.sigma[v];
      }
    }
  } else {
    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
      const auto [d, w] = heap.top();
      heap.pop();
      if (ws.settled[w]) continue;
      ws.settled[w] = 1;
      ws.order.push_back(w);
      if (w != source) {
        double paths = 0.0;
        for (const auto& nb : graph.neighbors(w)) {
          if (ws.settled[nb.node] && nb.node != w && is_pred(nb.node, nb.weight, w)) paths += ws.sigma[nb.node];
        }
        ws.sigma[w] = paths;
      }
      for (const auto& nb : graph.neighbors(w)) {
        if (ws.settled[nb.node]) continue;
        const double candidate = ws.dist[w] + nb.weight;
        if (ws.dist[nb.node] == kInf ||
            (candidate < ws.dist[nb.node] && !same_length(candidate, ws.dist[nb.node]))) {
          ws.dist[nb.node] = candidate;
          heap.push({candidate, nb.node});
        }
      }
    }
  }

  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    const NodeId w = *it;
    for (const auto& nb : graph.neighbors(w)) {
      const NodeId v = nb.node;
      if (ws.dist[v] < ws.dist[w] && is_pred(v, nb.weight, w)) {
        ws.delta[v] += ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
      }
    }
  }
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = v == source ? 0.0 : ws.delta[v];
}

}  // namespace

std::vector<double> betweenness_centrality(const Graph& graph, bool normalized, bool use_weights,
                                           Execution execution) {
  const std::size_t n = graph.node_count();
  std::vector<double> centrality(n, 0.0);
  if (use_weights) {
    for (const auto& e : graph.edges()) {
      if (!(e.weight > 0.0)) throw Error("weighted betweenness needs positive edge weights");
    }
  }

  // Per-source dependencies are summed in source order on both paths, so the
  // parallel result is bit-identical to the serial one.
  if (execution == Execution::Serial) {
    Workspace ws(n);
    std::vector<double> dependency(n);
    for (NodeId s = 0; s < n; ++s) {
      single_source(graph, s, use_weights, ws, dependency);
      for (std::size_t v = 0; v < n; ++v) centrality[v] += dependency[v];
    }
  } else {
    constexpr std::size_t kBlock = 64;
    std::vector<double> buffer(kBlock * n);
    for (std::size_t start = 0; start < n; start += kBlock) {
      const auto count = static_cast<std::ptrdiff_t>(std::min(kBlock, n - start));
#pragma omp parallel
      {
        Workspace ws(n);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t k = 0; k < count; ++k) {
          const auto offset = static_cast<std::size_t>(k) * n;
          single_source(graph, static_cast<NodeId>(start + static_cast<std::size_t>(k)), use_weights, ws,
                        std::span<double>(buffer.data() + offset, n));
        }
      }
      for (std::ptrdiff_t k = 0; k < count; ++k) {
        const double* row = buffer.data() + static_cast<std::size_t>(k) * n;
        for (std::size_t v = 0; v < n; ++v) centrality[v] += row[v];
      }
    }
  }

  // Each unordered pair was counted from both ends.
  for (double& c : centrality) c /= 2.0;
  if (normalized) {
    if (n <= 2) {
      std::fill(centrality.begin(), centrality.end(), 0.0);
    } else {
      const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
      for (double& c : centrality) c /= pairs;
    }
  }
  return centrality;
}

}  // namespace patentmap
