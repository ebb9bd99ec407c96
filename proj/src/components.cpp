#include <algorithm>
#include <numeric>

#include "patentmap/metrics.hpp"

namespace patentmap {

std::size_t degree(const Graph& graph, NodeId node) { return graph.degree(node); }

Components connected_components(const Graph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<int> raw(n, -1);
  std::vector<std::vector<NodeId>> members;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (raw[start] != -1) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    raw[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      members[id].push_back(v);
      for (const auto& nb : graph.neighbors(v)) {
        if (raw[nb.node] == -1) {
          raw[nb.node] = id;
          stack.push_back(nb.node);
        }
      }
    }
  }
  // Discovery order already follows the smallest member, so a stable sort by
  // size gives the documented label order.
  std::vector<int> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return members[a].size() > members[b].size(); });
  std::vector<int> relabel(members.size());
  Components out;
  out.sizes.reserve(members.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    relabel[order[i]] = static_cast<int>(i);
    out.sizes.push_back(members[order[i]].size());
  }
  out.label.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.label[v] = relabel[raw[v]];
  return out;
}

}  // namespace patentmap
