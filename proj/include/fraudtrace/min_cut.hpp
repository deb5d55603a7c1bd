#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "fraudtrace/graph.hpp"

namespace fraudtrace {

/// A bipartition of a graph's nodes. `side_a` always holds node 0.
struct Cut {
  std::vector<NodeId> side_a;
  std::vector<NodeId> side_b;
  Weight weight = 0;
};

namespace detail {

inline Cut make_cut(std::vector<bool> in_a, Weight weight) {
  if (!in_a[0]) in_a.flip();
  Cut c;
  c.weight = weight;
  for (NodeId i = 0; i < in_a.size(); ++i) (in_a[i] ? c.side_a : c.side_b).push_back(i);
  return c;
}

}  // namespace detail

/// Global minimum weighted cut.
///
/// Disconnected graphs are split at zero cost: the component holding node 0
/// against everything else. Connected graphs use Stoer-Wagner maximum
/// adjacency phases; each phase starts from the lowest surviving id and ties
/// in the adjacency search go to the lowest id, and the first phase that
/// reaches the minimum wins. The result is a pure function of the graph.
inline Cut min_cut(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw Error("min_cut needs at least 2 nodes, got " + std::to_string(n));

  const auto comps = connected_components(g);
  if (comps.size() > 1) {
    std::vector<bool> in_a(n, false);
    for (auto u : comps.front()) in_a[u] = true;
    return detail::make_cut(std::move(in_a), 0);
  }

  std::vector<Weight> w(n * n, 0);
  for (const auto& e : g.edges()) {
    w[e.u * n + e.v] += e.weight;
    w[e.v * n + e.u] += e.weight;
  }
  // members[v]: original nodes merged into super-node v
  std::vector<std::vector<NodeId>> members(n);
  for (NodeId i = 0; i < n; ++i) members[i] = {i};
  std::vector<NodeId> active(n);
  for (NodeId i = 0; i < n; ++i) active[i] = i;

  Weight best = std::numeric_limits<Weight>::max();
  std::vector<NodeId> best_side;
  std::vector<Weight> key(n);
  std::vector<bool> added(n);

  while (active.size() > 1) {
    for (auto v : active) {
      key[v] = 0;
      added[v] = false;
    }
    NodeId prev = active.front();
    NodeId last = prev;
    added[prev] = true;
    for (auto v : active) key[v] = w[prev * n + v];
    for (std::size_t step = 1; step < active.size(); ++step) {
      NodeId next = 0;
      Weight best_key = -1;
      for (auto v : active)
        if (!added[v] && key[v] > best_key) {
          best_key = key[v];
          next = v;
        }
      added[next] = true;
      prev = last;
      last = next;
      if (step + 1 == active.size()) {
        if (best_key < best) {
          best = best_key;
          best_side = members[last];
        }
      } else {
        for (auto v : active)
          if (!added[v]) key[v] += w[next * n + v];
      }
    }
    // merge `last` into `prev`
    for (auto v : active) {
      w[prev * n + v] += w[last * n + v];
      w[v * n + prev] = w[prev * n + v];
    }
    w[prev * n + prev] = 0;
    members[prev].insert(members[prev].end(), members[last].begin(), members[last].end());
    active.erase(std::find(active.begin(), active.end(), last));
  }

  std::vector<bool> in_a(n, false);
  for (auto u : best_side) in_a[u] = true;
  return detail::make_cut(std::move(in_a), best);
}

}  // namespace fraudtrace
