#pragma once

#include <utility>
#include <vector>

namespace lscale {

// Immutable undirected graph over dense 0-based node ids. Edges are stored
// once in canonical (min,max) order; self-loops are never stored (feature
// propagation adds them on the fly).
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;   // canonical, sorted, unique
  std::vector<std::vector<int>> adjacency;  // sorted neighbor lists
  std::vector<int> degree;                  // degree[u] == adjacency[u].size()

  int num_edges() const { return static_cast<int>(edges.size()); }

  // Deduplicates (u,v)/(v,u) pairs and drops self-loops (logged).
  // Throws on node ids outside [0, n).
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& raw);
};

}  // namespace lscale
