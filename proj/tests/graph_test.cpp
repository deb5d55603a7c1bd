#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace fraudtrace;
using namespace ft_test;

namespace {

std::vector<std::string> names(const WeightedGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (auto i : ids) out.push_back(g.node(i));
  return out;
}

AdjMatrix two_k6_bridged() {
  auto m = cliques({6, 6});
  link(m, 5, 6, 1);
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Rational / Rng

TEST(Rational, ReducesAndComparesExactly) {
  EXPECT_EQ(Rational(40, 220), Rational(2, 11));
  EXPECT_EQ(Rational(2, -4).str(), "-1/2");
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational::from_double(0.5), Rational(1, 2));
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(7), b(7), c(8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.between(-2, 2);
    EXPECT_GE(v, -2);
    EXPECT_LE(v, 2);
  }
}

TEST(ParallelFor, VisitsEveryIndexAndRethrowsFirstFailure) {
  std::vector<int> hit(50, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 4) throw DataError("four");
                            }),
               DataError);
}

// ---------------------------------------------------------------------------
// WeightedGraph

TEST(WeightedGraph, RejectsMalformedInput) {
  const std::vector<Edge> loop = {{0, 0, 1}};
  EXPECT_THROW(WeightedGraph({"a", "b"}, loop), Error);
  const std::vector<Edge> zero = {{0, 1, 0}};
  EXPECT_THROW(WeightedGraph({"a", "b"}, zero), Error);
  const std::vector<Edge> dup = {{0, 1, 1}, {1, 0, 2}};
  EXPECT_THROW(WeightedGraph({"a", "b"}, dup), Error);
  EXPECT_THROW(WeightedGraph({"b", "a"}, {}), Error);
}

TEST(WeightedGraph, AdjacencyIsSymmetric) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_matrix(rng, 9, 0.5, 4);
    const auto g = graph_from_matrix(m);
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v = 0; v < g.node_count(); ++v) {
        EXPECT_EQ(g.weight(u, v), g.weight(v, u));
        EXPECT_EQ(g.weight(u, v), u == v ? 0 : m[u][v]);
      }
  }
}

TEST(WeightedGraph, InducedSubgraphKeepsInternalEdges) {
  auto m = cliques({4});
  link(m, 0, 1, 3);
  const auto g = graph_from_matrix(m);
  const std::vector<NodeId> keep = {3, 1, 0, 1};
  const auto sub = g.induced(keep);
  EXPECT_EQ(sub.nodes(), (std::vector<std::string>{"n000", "n001", "n003"}));
  EXPECT_EQ(sub.edge_count(), 3u);
  EXPECT_EQ(sub.weight(0, 1), 3);
}

TEST(WeightedGraph, LightEdgesAreDropped) {
  auto m = cliques({3});
  link(m, 0, 1, 2);
  const auto g = graph_from_matrix(m).without_light_edges(2);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
}

// ---------------------------------------------------------------------------
// Co-activity and union graphs

TEST(CoActivityGraph, TwoAccountsOneSharedProduct) {
  const auto c = CorpusBuilder().review("a", "P").review("b", "P").build();
  const auto g = build_co_activity_graph(c, "P");
  ASSERT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.weight(0, 1), 1);
  EXPECT_EQ(g.product_id(), std::optional<std::string>("P"));
}

TEST(CoActivityGraph, WeightsCountProductsAcrossCorpus) {
  const auto c = CorpusBuilder().review("a", "P").review("a", "Q").review("b", "P").review("b", "Q").review("c", "P").build();
  const auto g = build_co_activity_graph(c, "P");
  ASSERT_EQ(g.nodes(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(g.weight(0, 1), 2);
  EXPECT_EQ(g.weight(0, 2), 1);
  EXPECT_EQ(g.weight(1, 2), 1);
}

TEST(CoActivityGraph, SingleReviewerHasNoEdges) {
  const auto g = build_co_activity_graph(CorpusBuilder().review("a", "P").review("a", "P").build(), "P");
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(CoActivityGraph, UnknownProductIsAnError) {
  EXPECT_THROW(build_co_activity_graph(CorpusBuilder().review("a", "P").build(), "Z"), DataError);
}

TEST(CoActivityGraph, EveryReviewerPairIsConnected) {
  Rng rng(5);
  CorpusBuilder b;
  for (int i = 0; i < 40; ++i) b.review("acct" + std::to_string(rng.below(12)), "P" + std::to_string(rng.below(4)));
  const auto c = b.build();
  for (const auto& p : c.products()) {
    const auto g = build_co_activity_graph(c, p);
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v = u + 1; v < g.node_count(); ++v) EXPECT_GE(g.weight(u, v), 1);
  }
}

TEST(CoActivityGraph, BeyondTargetScopeExcludesTheProductItself) {
  const auto c = CorpusBuilder().review("a", "P").review("a", "Q").review("b", "P").review("b", "Q").review("c", "P").build();
  const auto g = build_co_activity_graph(c, "P", CoActivityScope::beyond_target);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.weight(0, 1), 1);
}

TEST(UnionGraph, SharedReviewerAppearsOnce) {
  const auto c = CorpusBuilder().review("a", "P").review("a", "Q").review("b", "P").review("c", "Q").build();
  const auto g = build_union_graph(c, {"P", "Q"});
  EXPECT_EQ(g.nodes(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(g.weight(0, 1), 1);
  EXPECT_EQ(g.weight(0, 2), 1);
  EXPECT_EQ(g.weight(1, 2), 0);
}

TEST(UnionGraph, DisjointReviewerSetsAreDisconnected) {
  const auto c = CorpusBuilder().review("a", "P").review("b", "P").review("c", "Q").review("d", "Q").build();
  const auto g = build_union_graph(c, {"P", "Q"});
  EXPECT_EQ(connected_components(g).size(), 2u);
}

TEST(UnionGraph, EmptyProductSetGivesEmptyGraph) {
  const auto c = CorpusBuilder().review("a", "P").build();
  EXPECT_TRUE(build_union_graph(c, {}).empty());
  EXPECT_THROW(build_union_graph(c, {"nope"}), DataError);
}

TEST(UnionGraph, WeightsMatchNestedLoopCount) {
  // 5 accounts over 3 products
  const std::vector<std::pair<std::string, std::string>> reviews = {
      {"a1", "P1"}, {"a1", "P2"}, {"a1", "P3"}, {"a2", "P1"}, {"a2", "P2"}, {"a3", "P2"},
      {"a3", "P3"}, {"a4", "P3"}, {"a5", "P1"}, {"a5", "P3"}, {"a2", "P1"}};
  CorpusBuilder b;
  for (const auto& [a, p] : reviews) b.review(a, p);
  b.label("a1", "W1").label("a2", "W1");
  const auto c = b.build();
  const auto g = build_union_graph(c, {"P1", "P2", "P3"});
  ASSERT_EQ(g.node_count(), 5u);
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) {
      Weight expect = 0;
      for (const std::string p : {"P1", "P2", "P3"}) {
        bool hu = false, hv = false;
        for (const auto& [a, q] : reviews) {
          hu |= a == g.node(u) && q == p;
          hv |= a == g.node(v) && q == p;
        }
        expect += hu && hv;
      }
      EXPECT_EQ(g.weight(u, v), expect) << g.node(u) << " " << g.node(v);
    }
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"W1", "W1", "unknown", "unknown", "unknown"}));
}

TEST(GraphExport, EdgeListAndLabels) {
  const auto c = CorpusBuilder().review("a", "P").review("b", "P").review("c", "P").label("a", "W9").build();
  const auto g = build_union_graph(c, {"P"});
  std::ostringstream edges, labels;
  write_edge_list(edges, g);
  write_node_labels(labels, g);
  EXPECT_EQ(edges.str(), "a b 1\na c 1\nb c 1\n");
  EXPECT_EQ(labels.str(), "a W9\nb unknown\nc unknown\n");
}

// ---------------------------------------------------------------------------
// Densities

TEST(TriangleDensity, CompleteGraphIsOne) {
  const auto g = graph_from_matrix(cliques({4}));
  EXPECT_EQ(count_triangles(g), 4);
  EXPECT_EQ(triangle_density(g), Rational(1));
  EXPECT_EQ(edge_density(g), Rational(1));
}

TEST(TriangleDensity, StarIsTriangleFree) {
  AdjMatrix m(5, std::vector<Weight>(5, 0));
  for (int i = 1; i < 5; ++i) link(m, 0, i, 1);
  EXPECT_EQ(triangle_density(graph_from_matrix(m)), Rational(0));
}

TEST(TriangleDensity, SmallGraphsAreZero) {
  EXPECT_EQ(triangle_density(graph_from_matrix(cliques({2}))), Rational(0));
  EXPECT_EQ(edge_density(graph_from_matrix(cliques({1}))), Rational(0));
  EXPECT_EQ(edge_density(WeightedGraph()), Rational(0));
}

TEST(EdgeDensity, EmptyAndPathGraphs) {
  EXPECT_EQ(edge_density(graph_from_matrix(AdjMatrix(4, std::vector<Weight>(4, 0)))), Rational(0));
  AdjMatrix path(4, std::vector<Weight>(4, 0));
  link(path, 0, 1, 1);
  link(path, 1, 2, 1);
  link(path, 2, 3, 1);
  EXPECT_EQ(edge_density(graph_from_matrix(path)), Rational(1, 2));
}

TEST(TriangleDensity, MatchesTripleEnumerationOnRandomGraphs) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(rng, 10, 0.4, 1);
    const auto g = graph_from_matrix(m);
    EXPECT_EQ(count_triangles(g), oracle_triangles(m));
    EXPECT_EQ(triangle_density(g), Rational(oracle_triangles(m), 120));
  }
}

TEST(TriangleDensity, IgnoresWeights) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 8, 0.5, 1);
    const auto before = graph_from_matrix(m);
    for (auto& row : m)
      for (auto& w : row) w *= 7;
    const auto after = graph_from_matrix(m);
    EXPECT_EQ(triangle_density(before), triangle_density(after));
    EXPECT_EQ(edge_density(before), edge_density(after));
  }
}

TEST(TriangleCore, DropsNodesOffTriangles) {
  auto m = cliques({4, 2});
  link(m, 3, 4, 1);
  const auto g = graph_from_matrix(m);
  EXPECT_EQ(triangle_core(g), (std::vector<NodeId>{0, 1, 2, 3}));
}

// ---------------------------------------------------------------------------
// Min-cut

TEST(MinCut, TwoTrianglesJoinedByOneEdge) {
  auto m = cliques({3, 3});
  link(m, 2, 3, 1);
  const auto cut = min_cut(graph_from_matrix(m));
  EXPECT_EQ(cut.weight, 1);
  EXPECT_EQ(cut.side_a, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(cut.side_b, (std::vector<NodeId>{3, 4, 5}));
}

TEST(MinCut, DisconnectedGraphCostsNothing) {
  const auto cut = min_cut(graph_from_matrix(cliques({3, 2})));
  EXPECT_EQ(cut.weight, 0);
  EXPECT_EQ(cut.side_a, (std::vector<NodeId>{0, 1, 2}));
}

TEST(MinCut, NeedsTwoNodes) {
  EXPECT_THROW(min_cut(graph_from_matrix(cliques({1}))), Error);
  EXPECT_THROW(min_cut(WeightedGraph()), Error);
}

TEST(MinCut, MatchesExhaustiveBipartitions) {
  Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(rng.between(2, 10));
    const auto m = random_matrix(rng, n, rng.uniform() * 0.8 + 0.1, 5);
    const auto g = graph_from_matrix(m);
    const auto cut = min_cut(g);
    EXPECT_EQ(cut.weight, oracle_min_cut(m));
    EXPECT_EQ(crossing_weight(m, cut.side_a), cut.weight);
    EXPECT_FALSE(cut.side_a.empty());
    EXPECT_FALSE(cut.side_b.empty());
    EXPECT_EQ(cut.side_a.size() + cut.side_b.size(), n);
    for (NodeId u = 0; u < n; ++u) EXPECT_LE(cut.weight, g.weighted_degree(u));
  }
}

TEST(MinCut, SameGraphSameCut) {
  Rng rng(4);
  const auto g = graph_from_matrix(random_matrix(rng, 10, 0.6, 1));
  const auto a = min_cut(g);
  const auto b = min_cut(g);
  EXPECT_EQ(a.side_a, b.side_a);
  EXPECT_EQ(a.weight, b.weight);
}

// ---------------------------------------------------------------------------
// MCDense

TEST(McDense, BelowEtaYieldsNothing) { EXPECT_TRUE(mcdense(graph_from_matrix(cliques({4}))).empty()); }

TEST(McDense, DenseCliqueIsOneComponent) {
  const auto out = mcdense(graph_from_matrix(cliques({6})));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].accounts.size(), 6u);
  EXPECT_EQ(out[0].triangle_density, Rational(1));
}

TEST(McDense, BridgedCliquesSplitAtTheBridge) {
  const auto m = two_k6_bridged();
  const auto g = graph_from_matrix(m);
  EXPECT_EQ(triangle_density(g), Rational(40, 220));
  EXPECT_EQ(oracle_min_cut(m), 1);
  const auto cut = min_cut(g);
  EXPECT_EQ(cut.side_a, (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
  const auto out = mcdense(g);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].accounts, names(g, {0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(out[1].accounts, names(g, {6, 7, 8, 9, 10, 11}));
  for (const auto& c : out) {
    EXPECT_EQ(c.triangle_density, Rational(1));
    EXPECT_EQ(c.edge_density, Rational(1));
  }
}

TEST(McDense, SparseGraphIsEmittedWhole) {
  // a 6-cycle: density 0 and every cut side also 0
  AdjMatrix m(6, std::vector<Weight>(6, 0));
  for (int i = 0; i < 6; ++i) link(m, i, (i + 1) % 6, 1);
  const auto out = mcdense(graph_from_matrix(m));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].accounts.size(), 6u);
  EXPECT_EQ(out[0].triangle_density, Rational(0));
}

TEST(McDense, ConfigIsValidated) {
  DensityConfig c;
  c.eta = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.tau = Rational(0);
  EXPECT_THROW(c.validate(), ConfigError);
  c.tau = Rational(3, 2);
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.min_edge_weight = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(McDense, ComponentsAreDisjointAndSatisfyTheStopRule) {
  Rng rng(77);
  const DensityConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    // a few planted cliques with random noise edges
    auto m = cliques({static_cast<std::size_t>(rng.between(4, 8)), static_cast<std::size_t>(rng.between(4, 8)),
                      static_cast<std::size_t>(rng.between(2, 6))});
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        if (!m[i][j] && rng.bernoulli(0.1)) link(m, i, j, 1);
    const auto g = graph_from_matrix(m);
    const auto out = mcdense(g, cfg);
    std::set<std::string> seen;
    for (const auto& c : out) {
      EXPECT_GE(c.accounts.size(), cfg.eta);
      for (const auto& a : c.accounts) EXPECT_TRUE(seen.insert(a).second) << a;
      std::vector<NodeId> ids;
      for (const auto& a : c.accounts) ids.push_back(*g.find(a));
      const auto sub = g.induced(ids);
      EXPECT_EQ(triangle_density(sub), c.triangle_density);
      if (c.triangle_density < cfg.tau) {
        const auto cut = min_cut(sub);
        EXPECT_FALSE(triangle_density(sub.induced(cut.side_a)) > c.triangle_density &&
                     triangle_density(sub.induced(cut.side_b)) > c.triangle_density);
      }
    }
    EXPECT_EQ(mcdense(g, cfg), out);
  }
}

namespace {

/// Two worker cliques that also co-review two private products each, plus
/// three honest one-off reviewers, all on product P.
Corpus bridged_fixture() {
  CorpusBuilder b;
  for (int i = 0; i < 6; ++i) {
    const auto a = "a" + std::to_string(i);
    const auto bb = "b" + std::to_string(i);
    b.review(a, "P").review(a, "QA1").review(a, "QA2");
    b.review(bb, "P").review(bb, "QB1").review(bb, "QB2");
  }
  b.review("a5", "QB1");  // the bridge
  for (int i = 0; i < 3; ++i) b.review("h" + std::to_string(i), "P");
  return b.build();
}

}  // namespace

TEST(PartitionProduct, TwoWorkerCliquesAndHonestReviewers) {
  const auto c = bridged_fixture();
  const auto p = partition_product(c, "P");
  ASSERT_EQ(p.components.size(), 2u);
  EXPECT_EQ(p.components[0].accounts, (std::vector<std::string>{"a0", "a1", "a2", "a3", "a4", "a5"}));
  EXPECT_EQ(p.components[1].accounts, (std::vector<std::string>{"b0", "b1", "b2", "b3", "b4", "b5"}));
  EXPECT_EQ(p.honest, (std::vector<std::string>{"h0", "h1", "h2"}));
  EXPECT_EQ(suspicious_components(p, Rational(1)).size(), 2u);
  for (const auto& comp : p.components) EXPECT_EQ(comp.product_id, "P");
}

TEST(PartitionProduct, FewReviewersAreAllHonest) {
  CorpusBuilder b;
  for (int i = 0; i < 4; ++i) b.review("x" + std::to_string(i), "P").review("x" + std::to_string(i), "Q");
  const auto p = partition_product(b.build(), "P");
  EXPECT_TRUE(p.components.empty());
  EXPECT_EQ(p.honest.size(), 4u);
}

TEST(PartitionProduct, CoversEveryReviewerExactlyOnce) {
  const auto c = bridged_fixture();
  for (auto algo : {Algorithm::mcdense, Algorithm::dsg}) {
    const auto p = detect_product(c, "P", {}, algo);
    std::multiset<std::string> all(p.honest.begin(), p.honest.end());
    for (const auto& comp : p.components) all.insert(comp.accounts.begin(), comp.accounts.end());
    const auto reviewers = c.reviewers_of("P");
    EXPECT_EQ(std::vector<std::string>(all.begin(), all.end()), reviewers);
  }
}

TEST(PartitionProduct, ComponentsSortedByDensity) {
  std::vector<FraudComponent> cs(3);
  cs[0].accounts = {"x"};
  cs[0].triangle_density = Rational(1, 3);
  cs[1].accounts = {"y"};
  cs[1].triangle_density = Rational(1);
  cs[2].accounts = {"a", "b"};
  cs[2].triangle_density = Rational(1, 3);
  sort_components(cs);
  EXPECT_EQ(cs[0].accounts, std::vector<std::string>{"y"});
  EXPECT_EQ(cs[1].accounts, (std::vector<std::string>{"a", "b"}));
}

TEST(SuspiciousComponents, FiltersByDensity) {
  Partition p;
  p.components.resize(2);
  p.components[0].triangle_density = Rational(1);
  p.components[1].triangle_density = Rational(3, 10);
  EXPECT_EQ(suspicious_components(p, Rational(1, 2)).size(), 1u);
  EXPECT_EQ(suspicious_components(p, Rational(0)).size(), 2u);
}

TEST(DetectionGraph, DropsLightEdgesAndTriangleFreeNodes) {
  const auto c = bridged_fixture();
  const auto g = detection_graph(c, "P", {});
  EXPECT_EQ(g.node_count(), 12u);
  EXPECT_EQ(connected_components(g).size(), 2u);
  DensityConfig keep;
  keep.prune_triangle_free = false;
  keep.min_edge_weight = 1;
  const auto full = detection_graph(c, "P", keep);
  EXPECT_EQ(full.node_count(), 15u);
  EXPECT_TRUE(full.has_edge(*full.find("a5"), *full.find("b0")));
}

// ---------------------------------------------------------------------------
// DSG

TEST(Dsg, SingleTriangle) {
  const auto d = densest_subgraph(graph_from_matrix(cliques({3})));
  EXPECT_EQ(d.nodes, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(d.density, Rational(1, 3));
}

TEST(Dsg, TriangleWithPendantReturnsTheTriangle) {
  auto m = cliques({3, 1});
  link(m, 2, 3, 1);
  const auto g = graph_from_matrix(m);
  const auto trace = peel(g);
  EXPECT_EQ(trace.initial_density, Rational(1, 4));
  ASSERT_EQ(trace.steps.size(), 4u);
  EXPECT_EQ(trace.steps[0].first, 3u);
  EXPECT_EQ(trace.steps[0].second, Rational(1, 3));
  EXPECT_EQ(trace.best_removed, 1u);
  const auto d = densest_subgraph(g);
  EXPECT_EQ(d.nodes, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(d.density, Rational(1, 3));
}

TEST(Dsg, TriangleFreeGraphReturnsEverything) {
  AdjMatrix m(5, std::vector<Weight>(5, 0));
  for (int i = 1; i < 5; ++i) link(m, 0, i, 1);
  const auto d = densest_subgraph(graph_from_matrix(m));
  EXPECT_EQ(d.nodes.size(), 5u);
  EXPECT_EQ(d.density, Rational(0));
}

TEST(Dsg, TraceRemovesEveryNodeOnce) {
  Rng rng(8);
  const auto g = graph_from_matrix(random_matrix(rng, 11, 0.5, 3));
  const auto trace = peel(g);
  ASSERT_EQ(trace.steps.size(), g.node_count());
  std::set<NodeId> removed;
  for (const auto& [u, d] : trace.steps) EXPECT_TRUE(removed.insert(u).second);
  EXPECT_EQ(trace.steps.back().second, Rational(0));
  Rational best = trace.initial_density;
  for (const auto& [u, d] : trace.steps) best = std::max(best, d);
  EXPECT_EQ(trace.best_density, best);
}

TEST(DsgComponents, TwoDisjointK6) {
  const auto g = graph_from_matrix(cliques({6, 6}));
  const auto out = dsg_components(g, 5);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (std::vector<NodeId>{6, 7, 8, 9, 10, 11}));
  EXPECT_EQ(out[1], (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
}

TEST(DsgComponents, EmptyGraph) { EXPECT_TRUE(dsg_components(WeightedGraph(), 5).empty()); }

TEST(DsgComponents, IsolatedNodesPeelFirst) {
  const auto out = dsg_components(graph_from_matrix(cliques({6, 1, 1, 1, 1})), 5);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
}

TEST(DsgComponents, SetsAreDisjointAndDenserThanTheirSource) {
  Rng rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = graph_from_matrix(random_matrix(rng, 12, 0.55, 3));
    std::vector<NodeId> remaining(g.node_count());
    for (NodeId i = 0; i < remaining.size(); ++i) remaining[i] = i;
    std::set<NodeId> seen;
    for (const auto& set : dsg_components(g, 3)) {
      const auto source = triangles_per_node(g.induced(remaining));
      EXPECT_GE(triangles_per_node(g.induced(set)), source);
      for (auto u : set) {
        EXPECT_TRUE(seen.insert(u).second);
        remaining.erase(std::find(remaining.begin(), remaining.end(), u));
      }
    }
  }
}

TEST(Dsg, GreedyMatchesExhaustiveOnCliqueFixtures) {
  std::vector<AdjMatrix> fixtures = {cliques({5}), cliques({6, 3}), cliques({4, 1, 1})};
  auto pendants = cliques({5, 1, 1});
  link(pendants, 0, 5, 1);
  link(pendants, 3, 6, 2);
  fixtures.push_back(pendants);
  for (const auto& m : fixtures) EXPECT_EQ(densest_subgraph(graph_from_matrix(m)).density, oracle_densest(m));
}

TEST(Dsg, GreedyGapOnRandomGraphsIsRecorded) {
  Rng rng(555);
  int exact = 0;
  double worst = 1.0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto m = random_matrix(rng, 12, 0.5, 3);
    const auto greedy = densest_subgraph(graph_from_matrix(m)).density;
    const auto best = oracle_densest(m);
    EXPECT_LE(greedy, best);
    if (greedy == best) ++exact;
    if (best > Rational(0)) worst = std::min(worst, greedy.value() / best.value());
  }
  RecordProperty("exact_of_25", exact);
  RecordProperty("worst_ratio", std::to_string(worst));
}

TEST(DsgPartition, SameSchemaAsMcDense) {
  const auto c = bridged_fixture();
  const auto p = dsg_partition(c, "P");
  ASSERT_EQ(p.components.size(), 2u);
  for (const auto& comp : p.components) {
    EXPECT_EQ(comp.accounts.size(), 6u);
    EXPECT_EQ(comp.triangle_density, Rational(1));
  }
  EXPECT_EQ(p.honest.size(), 3u);
}

TEST(Algorithm, NamesRoundTrip) {
  EXPECT_EQ(parse_algorithm("dsg"), Algorithm::dsg);
  EXPECT_STREQ(algorithm_name(parse_algorithm("mcdense")), "mcdense");
  EXPECT_THROW(parse_algorithm("louvain"), ConfigError);
}
