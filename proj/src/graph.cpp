#include "lscale/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lscale/log.hpp"

namespace lscale {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& raw) {
  if (n < 0) throw std::invalid_argument("Graph: negative node count");
  Graph g;
  g.n = n;

  std::vector<std::pair<int, int>> canon;
  canon.reserve(raw.size());
  int dropped_loops = 0;
  for (const auto& [u, v] : raw) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::out_of_range("Graph: node id out of range: (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") with n=" + std::to_string(n));
    if (u == v) {
      ++dropped_loops;
      continue;
    }
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  if (dropped_loops > 0)
    log_note("dropped " + std::to_string(dropped_loops) + " self-loop edge(s)");

  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  g.edges = std::move(canon);

  g.adjacency.assign(n, {});
  for (const auto& [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());

  g.degree.resize(n);
  for (int u = 0; u < n; ++u) g.degree[u] = static_cast<int>(g.adjacency[u].size());
  return g;
}

}  // namespace lscale
