#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fraudtrace/common.hpp"
#include "fraudtrace/corpus.hpp"

namespace fraudtrace {

using NodeId = std::uint32_t;
using Weight = std::int64_t;

struct Neighbor {
  NodeId node;
  Weight weight;
};

struct Edge {
  NodeId u;
  NodeId v;
  Weight weight;
};

inline constexpr const char* kUnknownLabel = "unknown";

/// Undirected weighted graph over named nodes. Nodes are kept in sorted name
/// order, so NodeId order equals account_id order; adjacency lists are
/// sorted by neighbor id. Immutable once built.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// `nodes` must be sorted and unique. Edges must have u != v, weight >= 1
  /// and appear once per unordered pair.
  WeightedGraph(std::vector<std::string> nodes, std::span<const Edge> edges) : nodes_(std::move(nodes)) {
    if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
        std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
      throw Error("graph nodes must be sorted and unique");
    adj_.resize(nodes_.size());
    for (const auto& e : edges) {
      if (e.u == e.v) throw Error("self-loop on " + nodes_.at(e.u));
      if (e.weight < 1) throw Error("edge weight must be >= 1");
      if (e.u >= nodes_.size() || e.v >= nodes_.size()) throw Error("edge endpoint out of range");
      adj_[e.u].push_back({e.v, e.weight});
      adj_[e.v].push_back({e.u, e.weight});
    }
    for (auto& list : adj_) {
      std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
      for (std::size_t i = 1; i < list.size(); ++i)
        if (list[i].node == list[i - 1].node) throw Error("duplicate edge");
    }
    edge_count_ = edges.size();
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return nodes_.empty(); }

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::string& node(NodeId id) const { return nodes_.at(id); }

  std::optional<NodeId> find(const std::string& name) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end() || *it != name) return std::nullopt;
    return static_cast<NodeId>(it - nodes_.begin());
  }

  std::span<const Neighbor> neighbors(NodeId u) const { return adj_.at(u); }

  Weight weight(NodeId u, NodeId v) const {
    const auto& list = adj_.at(u);
    auto it = std::lower_bound(list.begin(), list.end(), v, [](const Neighbor& n, NodeId x) { return n.node < x; });
    return (it != list.end() && it->node == v) ? it->weight : 0;
  }

  bool has_edge(NodeId u, NodeId v) const { return weight(u, v) > 0; }

  Weight weighted_degree(NodeId u) const {
    Weight s = 0;
    for (const auto& n : adj_.at(u)) s += n.weight;
    return s;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adj_.size(); ++u)
      for (const auto& n : adj_[u])
        if (u < n.node) out.push_back({u, n.node, n.weight});
    return out;
  }

  /// Subgraph induced by `keep` (any order; duplicates ignored).
  WeightedGraph induced(std::span<const NodeId> keep) const {
    std::vector<NodeId> ids(keep.begin(), keep.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<std::int64_t> remap(nodes_.size(), -1);
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      remap.at(ids[i]) = static_cast<std::int64_t>(i);
      names.push_back(nodes_[ids[i]]);
    }
    std::vector<Edge> sub;
    for (auto u : ids)
      for (const auto& n : adj_[u])
        if (u < n.node && remap[n.node] >= 0)
          sub.push_back({static_cast<NodeId>(remap[u]), static_cast<NodeId>(remap[n.node]), n.weight});
    WeightedGraph g(std::move(names), sub);
    g.product_id_ = product_id_;
    if (!labels_.empty())
      for (auto u : ids) g.labels_.push_back(labels_[u]);
    return g;
  }

  /// Same nodes, keeping only edges of weight >= min_weight.
  WeightedGraph without_light_edges(Weight min_weight) const {
    std::vector<Edge> kept;
    for (const auto& e : edges())
      if (e.weight >= min_weight) kept.push_back(e);
    WeightedGraph g(nodes_, kept);
    g.product_id_ = product_id_;
    g.labels_ = labels_;
    return g;
  }

  const std::optional<std::string>& product_id() const noexcept { return product_id_; }
  void set_product_id(std::string p) { product_id_ = std::move(p); }

  /// Per-node labels (worker id or "unknown"); empty when unlabeled.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != nodes_.size()) throw Error("label count does not match node count");
    labels_ = std::move(labels);
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<Neighbor>> adj_;
  std::size_t edge_count_ = 0;
  std::optional<std::string> product_id_;
  std::vector<std::string> labels_;
};

/// Which products count toward a product's co-activity weights.
enum class CoActivityScope {
  all_products,    // w_ij counts every co-reviewed product, the target included
  beyond_target,   // the target itself is not counted; zero-weight pairs get no edge
};

namespace detail {

/// Products of each account as sorted dense ids, for fast intersections.
class ProductSets {
 public:
  explicit ProductSets(const Corpus& corpus) : corpus_(corpus) {
    std::size_t i = 0;
    for (const auto& p : corpus.products()) ids_.emplace(p, static_cast<std::uint32_t>(i++));
  }

  std::vector<std::uint32_t> of(const std::string& account) const {
    std::vector<std::uint32_t> out;
    for (const auto& p : corpus_.products_of_account(account)) out.push_back(ids_.at(p));
    return out;  // std::set iteration order == id order
  }

 private:
  const Corpus& corpus_;
  std::map<std::string, std::uint32_t> ids_;
};

inline Weight intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  Weight n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

inline WeightedGraph pairwise_graph(const Corpus& corpus, std::vector<std::string> nodes, Weight offset) {
  ProductSets sets(corpus);
  std::vector<std::vector<std::uint32_t>> prods;
  prods.reserve(nodes.size());
  for (const auto& a : nodes) prods.push_back(sets.of(a));
  std::vector<Edge> edges;
  for (NodeId u = 0; u < nodes.size(); ++u)
    for (NodeId v = u + 1; v < nodes.size(); ++v) {
      const Weight w = intersection_size(prods[u], prods[v]) - offset;
      if (w > 0) edges.push_back({u, v, w});
    }
  return WeightedGraph(std::move(nodes), edges);
}

}  // namespace detail

/// Co-activity graph of one product: a node per reviewer, w_ij = number of
/// products (over the whole corpus) both accounts reviewed.
inline WeightedGraph build_co_activity_graph(const Corpus& corpus, const std::string& product_id,
                                             CoActivityScope scope = CoActivityScope::all_products) {
  if (!corpus.has_product(product_id)) throw DataError("unknown product " + product_id);
  auto g = detail::pairwise_graph(corpus, corpus.reviewers_of(product_id),
                                  scope == CoActivityScope::beyond_target ? 1 : 0);
  g.set_product_id(product_id);
  return g;
}

/// Co-activity graph over an explicit account set, labelled with the corpus
/// attributions.
inline WeightedGraph build_account_graph(const Corpus& corpus, const std::set<std::string>& accounts) {
  for (const auto& a : accounts)
    if (!corpus.has_account(a)) throw DataError("unknown account " + a);
  auto g = detail::pairwise_graph(corpus, {accounts.begin(), accounts.end()}, 0);
  std::vector<std::string> labels;
  labels.reserve(g.node_count());
  for (const auto& a : g.nodes()) labels.push_back(corpus.worker_of(a).value_or(kUnknownLabel));
  g.set_labels(std::move(labels));
  return g;
}

/// Deduplicated graph over the reviewers of a product set, labelled with
/// the corpus attributions.
inline WeightedGraph build_union_graph(const Corpus& corpus, const std::set<std::string>& product_ids) {
  std::set<std::string> reviewers;
  for (const auto& p : product_ids) {
    if (!corpus.has_product(p)) throw DataError("unknown product " + p);
    for (auto& a : corpus.reviewers_of(p)) reviewers.insert(std::move(a));
  }
  return build_account_graph(corpus, reviewers);
}

/// Number of triangles per node (each triangle counted once at each corner).
inline std::vector<std::int64_t> node_triangles(const WeightedGraph& g) {
  std::vector<std::int64_t> tri(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto nu = g.neighbors(u);
    for (const auto& vn : nu) {
      if (vn.node <= u) continue;
      auto nv = g.neighbors(vn.node);
      // common neighbors w > v
      auto i = std::upper_bound(nu.begin(), nu.end(), vn.node, [](NodeId x, const Neighbor& n) { return x < n.node; });
      auto j = std::upper_bound(nv.begin(), nv.end(), vn.node, [](NodeId x, const Neighbor& n) { return x < n.node; });
      while (i != nu.end() && j != nv.end()) {
        if (i->node < j->node) {
          ++i;
        } else if (j->node < i->node) {
          ++j;
        } else {
          ++tri[u];
          ++tri[vn.node];
          ++tri[i->node];
          ++i;
          ++j;
        }
      }
    }
  }
  return tri;
}

/// t(V): triangles formed by existing edges, weights ignored.
inline std::int64_t count_triangles(const WeightedGraph& g) {
  std::int64_t total = 0;
  for (auto t : node_triangles(g)) total += t;
  return total / 3;
}

/// rho(G) = t(V) / C(|V|, 3); 0 when |V| < 3.
inline Rational triangle_density(const WeightedGraph& g) {
  const auto n = static_cast<std::int64_t>(g.node_count());
  if (n < 3) return Rational(0);
  return Rational(count_triangles(g), choose3(n));
}

/// |E| / C(|V|, 2); 0 when |V| < 2.
inline Rational edge_density(const WeightedGraph& g) {
  const auto n = static_cast<std::int64_t>(g.node_count());
  if (n < 2) return Rational(0);
  return Rational(static_cast<std::int64_t>(g.edge_count()), choose2(n));
}

/// Connected components as sorted node lists, ordered by smallest member.
inline std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g) {
  std::vector<std::int64_t> comp(g.node_count(), -1);
  std::vector<std::vector<NodeId>> out;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] >= 0) continue;
    const auto id = static_cast<std::int64_t>(out.size());
    out.emplace_back();
    std::vector<NodeId> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (const auto& n : g.neighbors(u))
        if (comp[n.node] < 0) {
          comp[n.node] = id;
          stack.push_back(n.node);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

/// Repeatedly drops nodes that lie on no triangle until every remaining node
/// lies on at least one. Returns the surviving node ids of `g`.
inline std::vector<NodeId> triangle_core(const WeightedGraph& g) {
  std::vector<NodeId> alive(g.node_count());
  for (NodeId i = 0; i < alive.size(); ++i) alive[i] = i;
  WeightedGraph cur = g;
  while (!alive.empty()) {
    const auto tri = node_triangles(cur);
    std::vector<NodeId> keep_local, keep_global;
    for (NodeId i = 0; i < tri.size(); ++i)
      if (tri[i] > 0) {
        keep_local.push_back(i);
        keep_global.push_back(alive[i]);
      }
    if (keep_local.size() == alive.size()) break;
    cur = cur.induced(keep_local);
    alive = std::move(keep_global);
  }
  return alive;
}

/// Edge list "u v w" per line, for external visualization.
inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  for (const auto& e : g.edges()) out << g.node(e.u) << ' ' << g.node(e.v) << ' ' << e.weight << '\n';
}

/// Sidecar "node label" per line; label is "unknown" for unlabelled graphs.
inline void write_node_labels(std::ostream& out, const WeightedGraph& g) {
  for (NodeId u = 0; u < g.node_count(); ++u)
    out << g.node(u) << ' ' << (g.labels().empty() ? std::string(kUnknownLabel) : g.labels()[u]) << '\n';
}

}  // namespace fraudtrace
