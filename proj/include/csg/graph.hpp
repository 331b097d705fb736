// Small graph utilities: Tarjan SCC (iterative) and reachability.
#pragma once

#include <algorithm>
#include <vector>

namespace csg {

// Strongly connected components of a directed graph given by adjacency
// lists. Returns component ids per vertex, numbered in reverse topological
// order of the condensation (Tarjan's numbering: a component's id is
// assigned when it is completed, so edges go from higher ids to lower or
// stay inside a component... specifically every edge u->v has
// comp[u] >= comp[v]).
struct SccResult {
  std::vector<int> comp;  // per-vertex component id
  int count = 0;
};

inline SccResult tarjan_scc(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  int next_index = 0;
  struct Frame {
    int v;
    std::size_t child;
  };
  std::vector<Frame> frames;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            res.comp[w] = res.count;
            if (w == v) break;
          }
          ++res.count;
        }
      }
    }
  }
  return res;
}

// Vertices from which `target` is reachable (includes target itself):
// backward BFS over the edge list.
inline std::vector<bool> can_reach(const std::vector<std::vector<int>>& adj, int target) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> radj(n);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) radj[v].push_back(u);
  std::vector<bool> seen(n, false);
  std::vector<int> queue{target};
  seen[target] = true;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    for (int u : radj[v])
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
  }
  return seen;
}

}  // namespace csg
