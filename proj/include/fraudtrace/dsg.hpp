#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fraudtrace/graph.hpp"

namespace fraudtrace {

/// Greedy peeling record. `steps[i]` is the node removed at step i and the
/// density t(U)/|U| of what remains. `best_removed` is how many nodes were
/// peeled before the densest subgraph (0 = the whole graph).
struct PeelTrace {
  Rational initial_density;
  std::vector<std::pair<NodeId, Rational>> steps;
  std::size_t best_removed = 0;
  Rational best_density;
};

struct DenseSubgraph {
  std::vector<NodeId> nodes;  // sorted
  Rational density;           // t(U)/|U|
};

/// rho_D(U) = t(U) / |U|; 0 for the empty set.
inline Rational triangles_per_node(const WeightedGraph& g) {
  if (g.empty()) return Rational(0);
  return Rational(count_triangles(g), static_cast<std::int64_t>(g.node_count()));
}

/// Peels the node with the smallest weighted degree among the remaining
/// nodes (ties: lowest id) until none remain.
///
/// The best prefix is the one with maximum t(U)/|U|; among equal maxima the
/// later, smaller subgraph wins. If every density is zero the whole graph is
/// the answer.
inline PeelTrace peel(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  PeelTrace trace;
  std::vector<std::int64_t> tri = node_triangles(g);
  std::int64_t total = 0;
  for (auto t : tri) total += t;
  total /= 3;
  std::vector<Weight> degree(n);
  for (NodeId u = 0; u < n; ++u) degree[u] = g.weighted_degree(u);
  std::vector<bool> gone(n, false);

  trace.initial_density = n == 0 ? Rational(0) : Rational(total, static_cast<std::int64_t>(n));
  trace.best_density = trace.initial_density;
  trace.steps.reserve(n);

  for (std::size_t removed = 1; removed <= n; ++removed) {
    NodeId pick = 0;
    Weight pick_deg = 0;
    bool found = false;
    for (NodeId u = 0; u < n; ++u)
      if (!gone[u] && (!found || degree[u] < pick_deg)) {
        pick = u;
        pick_deg = degree[u];
        found = true;
      }
    gone[pick] = true;
    total -= tri[pick];
    // each surviving triangle through `pick` loses it
    auto nb = g.neighbors(pick);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (gone[nb[i].node]) continue;
      degree[nb[i].node] -= nb[i].weight;
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!gone[nb[j].node] && g.has_edge(nb[i].node, nb[j].node)) {
          --tri[nb[i].node];
          --tri[nb[j].node];
        }
    }
    const std::size_t left = n - removed;
    const Rational d = left == 0 ? Rational(0) : Rational(total, static_cast<std::int64_t>(left));
    trace.steps.emplace_back(pick, d);
    if (left > 0 && d >= trace.best_density && d > Rational(0)) {
      trace.best_density = d;
      trace.best_removed = removed;
    }
  }
  return trace;
}

inline DenseSubgraph densest_subgraph(const WeightedGraph& g) {
  const auto trace = peel(g);
  std::vector<bool> gone(g.node_count(), false);
  for (std::size_t i = 0; i < trace.best_removed; ++i) gone[trace.steps[i].first] = true;
  DenseSubgraph out;
  out.density = trace.best_density;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (!gone[u]) out.nodes.push_back(u);
  return out;
}

/// Repeated densest-subgraph extraction: take the densest subgraph, remove
/// it, repeat. Stops at the first result smaller than eta (discarded) or
/// when no nodes remain. Returned sets are node ids of `g`.
inline std::vector<std::vector<NodeId>> dsg_components(const WeightedGraph& g, std::size_t eta) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> remaining(g.node_count());
  for (NodeId i = 0; i < remaining.size(); ++i) remaining[i] = i;
  while (!remaining.empty()) {
    const auto sub = g.induced(remaining);
    const auto dense = densest_subgraph(sub);
    if (dense.nodes.size() < eta) break;
    std::vector<NodeId> found;
    std::vector<bool> take(remaining.size(), false);
    for (auto local : dense.nodes) {
      take[local] = true;
      found.push_back(remaining[local]);
    }
    out.push_back(std::move(found));
    std::vector<NodeId> rest;
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (!take[i]) rest.push_back(remaining[i]);
    remaining = std::move(rest);
  }
  return out;
}

}  // namespace fraudtrace
