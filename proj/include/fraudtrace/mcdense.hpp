#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fraudtrace/corpus.hpp"
#include "fraudtrace/graph.hpp"
#include "fraudtrace/min_cut.hpp"

namespace fraudtrace {

struct DensityConfig {
  std::size_t eta = 5;          // smallest component worth reporting
  Rational tau{1, 2};           // recursion stops once rho(G) >= tau
  // Graph preparation used by partition_product.
  CoActivityScope scope = CoActivityScope::beyond_target;
  Weight min_edge_weight = 2;   // lighter edges are dropped before detection
  bool prune_triangle_free = true;

  void validate() const {
    if (eta < 2) throw ConfigError("mcdense.eta must be >= 2");
    if (tau <= Rational(0) || tau > Rational(1)) throw ConfigError("mcdense.tau must be in (0,1]");
    if (min_edge_weight < 1) throw ConfigError("mcdense.min_edge_weight must be >= 1");
  }
};

struct FraudComponent {
  std::string product_id;
  std::vector<std::string> accounts;  // sorted
  Rational triangle_density;
  Rational edge_density;

  friend bool operator==(const FraudComponent&, const FraudComponent&) = default;
};

/// Reviewers of one product split into suspected single-worker components
/// and the honest remainder.
struct Partition {
  std::string product_id;
  std::vector<FraudComponent> components;
  std::vector<std::string> honest;  // sorted

  friend bool operator==(const Partition&, const Partition&) = default;
};

namespace detail {

inline FraudComponent as_component(const WeightedGraph& g, Rational rho) {
  FraudComponent c;
  c.product_id = g.product_id().value_or("");
  c.accounts = g.nodes();
  c.triangle_density = rho;
  c.edge_density = edge_density(g);
  return c;
}

inline void mcdense_step(const WeightedGraph& g, const DensityConfig& cfg, std::vector<FraudComponent>& out) {
  if (g.node_count() < cfg.eta) return;
  const auto rho = triangle_density(g);
  if (rho < cfg.tau) {
    const auto cut = min_cut(g);
    auto g1 = g.induced(cut.side_a);
    auto g2 = g.induced(cut.side_b);
    if (triangle_density(g1) > rho && triangle_density(g2) > rho) {
      mcdense_step(g1, cfg, out);
      mcdense_step(g2, cfg, out);
      return;
    }
  }
  out.push_back(as_component(g, rho));
}

}  // namespace detail

/// Min-cut based dense component detection.
///
/// A graph below eta nodes yields nothing. Otherwise it is cut at its
/// minimum weighted cut; when both sides are strictly denser (triangle
/// density) than the whole and the whole is below tau, both sides are
/// processed the same way, else the whole graph is one component. Cut sides
/// are never empty, so recursion depth is bounded by the node count.
inline std::vector<FraudComponent> mcdense(const WeightedGraph& g, const DensityConfig& cfg = {}) {
  cfg.validate();
  std::vector<FraudComponent> out;
  detail::mcdense_step(g, cfg, out);
  return out;
}

/// The graph MCDense runs on for a product: the co-activity graph in
/// `cfg.scope` without edges lighter than `cfg.min_edge_weight`, optionally
/// reduced to its triangle core.
inline WeightedGraph detection_graph(const Corpus& corpus, const std::string& product_id, const DensityConfig& cfg) {
  auto g = build_co_activity_graph(corpus, product_id, cfg.scope);
  if (cfg.min_edge_weight > 1) g = g.without_light_edges(cfg.min_edge_weight);
  if (cfg.prune_triangle_free) {
    const auto core = triangle_core(g);
    if (core.size() != g.node_count()) g = g.induced(core);
  }
  return g;
}

/// Orders components by descending triangle density, then size, then first account.
inline void sort_components(std::vector<FraudComponent>& cs) {
  std::sort(cs.begin(), cs.end(), [](const FraudComponent& a, const FraudComponent& b) {
    if (a.triangle_density != b.triangle_density) return a.triangle_density > b.triangle_density;
    if (a.accounts.size() != b.accounts.size()) return a.accounts.size() > b.accounts.size();
    return a.accounts < b.accounts;
  });
}

/// Builds a partition from detected components; every other reviewer is honest.
inline Partition make_partition(const Corpus& corpus, const std::string& product_id,
                                std::vector<FraudComponent> components) {
  Partition p;
  p.product_id = product_id;
  std::set<std::string> claimed;
  for (auto& c : components) {
    c.product_id = product_id;
    claimed.insert(c.accounts.begin(), c.accounts.end());
  }
  sort_components(components);
  p.components = std::move(components);
  for (auto& a : corpus.reviewers_of(product_id))
    if (!claimed.contains(a)) p.honest.push_back(std::move(a));
  return p;
}

inline Partition partition_product(const Corpus& corpus, const std::string& product_id, const DensityConfig& cfg = {}) {
  cfg.validate();
  return make_partition(corpus, product_id, mcdense(detection_graph(corpus, product_id, cfg), cfg));
}

inline std::vector<FraudComponent> suspicious_components(const Partition& p, Rational min_density) {
  std::vector<FraudComponent> out;
  for (const auto& c : p.components)
    if (c.triangle_density >= min_density) out.push_back(c);
  return out;
}

}  // namespace fraudtrace
