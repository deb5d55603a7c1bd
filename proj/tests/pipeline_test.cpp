#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace fraudtrace;
using namespace ft_test;

namespace {

WalkConfig small_walk() {
  WalkConfig w;
  w.gamma = 20;
  w.walk_len = 20;
  w.window = 3;
  w.dims = 32;
  w.epochs = 3;
  return w;
}

double mean_cosine(const Embedding& e, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  double s = 0;
  std::size_t n = 0;
  for (auto i : a)
    for (auto j : b)
      if (i != j) {
        s += cosine(e.row(i), e.row(j));
        ++n;
      }
  return s / double(n);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const auto status = std::system((std::string(FRAUDTRACE_CLI) + " -q " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioConfig one_worker_one_product() {
  ScenarioConfig c;
  c.n_workers = 1;
  c.accounts_per_worker = {10, 10};
  c.n_products = 1;
  c.fraud_product_fraction = 1.0;
  c.workers_per_fraud_product = {1, 1};
  c.reviews_per_worker_per_product = {10, 10};
  c.honest_reviewers_per_product = {0, 0};
  c.honest_background_reviews = {0, 0};
  c.background_products = 0;
  return c;
}

ScenarioConfig small_scenario(std::uint64_t seed) {
  ScenarioConfig c;
  c.n_workers = 3;
  c.n_products = 8;
  c.background_products = 200;
  c.seed = seed;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Random walks

TEST(RandomWalks, IsolatedNodeWalksHaveLengthOne) {
  const WeightedGraph g({"solo"}, std::vector<Edge>{});
  auto cfg = small_walk();
  const auto walks = random_walks(g, cfg);
  ASSERT_EQ(walks.size(), cfg.gamma);
  for (const auto& w : walks) EXPECT_EQ(w, Walk{0});
}

TEST(RandomWalks, TwoNodesAlternate) {
  const WeightedGraph g({"a", "b"}, std::vector<Edge>{{0, 1, 4}});
  const auto cfg = small_walk();
  const auto walks = random_walks(g, cfg);
  ASSERT_EQ(walks.size(), 2 * cfg.gamma);
  for (const auto& w : walks) {
    ASSERT_EQ(w.size(), cfg.walk_len);
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_NE(w[i], w[i - 1]);
  }
}

TEST(RandomWalks, HopsFollowEdgeWeights) {
  // centre 0 with neighbours 1 (weight 3) and 2 (weight 1)
  const WeightedGraph g({"c", "h", "l"}, std::vector<Edge>{{0, 1, 3}, {0, 2, 1}});
  WalkConfig cfg = small_walk();
  cfg.gamma = 100000;
  cfg.walk_len = 2;
  cfg.window = 1;
  const auto walks = random_walks(g, cfg);
  std::size_t heavy = 0, from_centre = 0;
  for (const auto& w : walks)
    if (w[0] == 0) {
      ++from_centre;
      heavy += w[1] == 1;
    }
  ASSERT_EQ(from_centre, cfg.gamma);
  EXPECT_NEAR(double(heavy) / double(from_centre), 0.75, 0.03);
}

TEST(RandomWalks, ThreadCountDoesNotChangeWalks) {
  Rng rng(4);
  const auto g = graph_from_matrix(random_matrix(rng, 15, 0.3, 4));
  auto cfg = small_walk();
  const auto one = random_walks(g, cfg);
  cfg.threads = 3;
  EXPECT_EQ(random_walks(g, cfg), one);
}

TEST(WalkConfig, RejectsDegenerateSettings) {
  WalkConfig w;
  w.dims = 0;
  EXPECT_THROW(w.validate(), ConfigError);
  w = WalkConfig{};
  w.window = w.walk_len;
  EXPECT_THROW(w.validate(), ConfigError);
  w = WalkConfig{};
  w.learning_rate = 0;
  EXPECT_THROW(w.validate(), ConfigError);
}

// ---------------------------------------------------------------------------
// Embedding training

TEST(Embedding, CliquesEmbedCloserInsideThanAcross) {
  auto m = cliques({6, 6});
  link(m, 5, 6, 1);
  const auto g = graph_from_matrix(m);
  const auto e = embed_graph(g, small_walk());
  const std::vector<std::size_t> a = {0, 1, 2, 3, 4, 5}, b = {6, 7, 8, 9, 10, 11};
  const double intra = (mean_cosine(e, a, a) + mean_cosine(e, b, b)) / 2;
  const double inter = mean_cosine(e, a, b);
  RecordProperty("intra_cosine", std::to_string(intra));
  RecordProperty("inter_cosine", std::to_string(inter));
  EXPECT_GT(intra, inter);
}

TEST(Embedding, NodeWithoutContextKeepsItsInitialVector) {
  const WeightedGraph g({"solo"}, std::vector<Edge>{});
  auto cfg = small_walk();
  const auto once = embed_graph(g, cfg);
  cfg.gamma = 5;
  cfg.epochs = 1;
  const auto again = embed_graph(g, cfg);
  EXPECT_EQ(once.data, again.data);
  for (float x : once.data) EXPECT_LE(std::abs(x), 0.5f / float(cfg.dims));
}

TEST(Embedding, SameSeedSameBits) {
  Rng rng(8);
  const auto g = graph_from_matrix(random_matrix(rng, 20, 0.3, 3));
  const auto cfg = small_walk();
  const auto a = embed_graph(g, cfg);
  const auto b = embed_graph(g, cfg);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  auto other = cfg;
  other.seed = 2;
  EXPECT_NE(embed_graph(g, other).data, a.data);
}

TEST(Embedding, LossDoesNotRiseAcrossEpochs) {
  const auto sc = generate(small_scenario(2));
  const auto fraud = sc.fraud_products();
  const auto g = build_union_graph(sc.corpus, {fraud.begin(), fraud.end()});
  auto cfg = small_walk();
  cfg.epochs = 5;
  const auto loss = embed_graph(g, cfg).epoch_loss;
  ASSERT_EQ(loss.size(), 5u);
  std::string trace;
  for (double l : loss) trace += std::to_string(l) + " ";
  RecordProperty("epoch_loss", trace);
  // past the first epoch the loss sits at its floor and only jitters with
  // the negative samples
  EXPECT_LT(loss[1], loss[0] * 0.95) << trace;
  double best = loss[0];
  for (std::size_t i = 1; i < loss.size(); ++i) {
    EXPECT_LE(loss[i], best * 1.005) << trace;
    best = std::min(best, loss[i]);
  }
  EXPECT_LT(loss.back(), loss.front()) << trace;
}

TEST(Embedding, SaveLoadRoundTrip) {
  TempDir dir("emb");
  const auto g = graph_from_matrix(cliques({4, 3}));
  const auto e = embed_graph(g, small_walk());
  save_embedding(e, dir.file("m.bin"), dir.file("n.txt"));
  const auto back = load_embedding(dir.file("m.bin"), dir.file("n.txt"));
  EXPECT_EQ(back.nodes, e.nodes);
  EXPECT_EQ(back.dims, e.dims);
  EXPECT_EQ(back.data, e.data);
}

TEST(Embedding, CorruptFilesAreDataErrors) {
  TempDir dir("embbad");
  const auto e = embed_graph(graph_from_matrix(cliques({4})), small_walk());
  save_embedding(e, dir.file("m.bin"), dir.file("n.txt"));
  EXPECT_THROW(load_embedding(dir.file("none.bin"), dir.file("n.txt")), DataError);
  {
    std::ofstream f(dir.file("bad.bin"), std::ios::binary);
    f << "NOTANEMBEDDINGFILE......";
  }
  EXPECT_THROW(load_embedding(dir.file("bad.bin"), dir.file("n.txt")), DataError);
  const auto bytes = slurp(dir.file("m.bin"));
  {
    std::ofstream f(dir.file("short.bin"), std::ios::binary);
    f << bytes.substr(0, bytes.size() - 4);
  }
  EXPECT_THROW(load_embedding(dir.file("short.bin"), dir.file("n.txt")), DataError);
  {
    std::ofstream f(dir.file("few.txt"));
    f << "n000\nn001\n";
  }
  EXPECT_THROW(load_embedding(dir.file("m.bin"), dir.file("few.txt")), DataError);
}

// ---------------------------------------------------------------------------
// Guilt by association

TEST(GuiltByAssociation, LabelsFollowTheirClique) {
  const auto g = graph_from_matrix(cliques({8, 8}));
  const auto e = embed_graph(g, small_walk());
  std::map<std::string, std::string> labels;
  std::set<std::string> query;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto w = i < 8 ? "W1" : "W2";
    if (i % 4 == 0)
      query.insert(node_name(i));
    else
      labels[node_name(i)] = w;
  }
  for (const auto algo : {"logistic", "knn"}) {
    GbaConfig cfg;
    cfg.classifier = algo;
    const auto out = guilt_by_association(e, labels, query, cfg);
    ASSERT_EQ(out.size(), query.size()) << algo;
    for (const auto& [node, l] : out) {
      EXPECT_EQ(l.worker_id, node < node_name(8) ? "W1" : "W2") << algo << " " << node;
      EXPECT_GE(l.score, cfg.threshold);
    }
  }
}

TEST(GuiltByAssociation, EdgeCases) {
  const auto e = embed_graph(graph_from_matrix(cliques({4})), small_walk());
  EXPECT_THROW(guilt_by_association(e, {{"n000", "W1"}, {"n001", "W1"}}, {"n002"}), Error);
  EXPECT_TRUE(guilt_by_association(e, {{"n000", "W1"}, {"n001", "W2"}}, {}).empty());
  GbaConfig never;
  never.threshold = 1.1;
  EXPECT_TRUE(guilt_by_association(e, {{"n000", "W1"}, {"n001", "W2"}}, {"n002"}, never).empty());
}

// ---------------------------------------------------------------------------
// Scenario generation

TEST(Synth, SingleWorkerProductIsOneClique) {
  const auto sc = generate(one_worker_one_product());
  ASSERT_EQ(sc.products().size(), 1u);
  const auto p = sc.products().front();
  const auto& truth = sc.truth.products.at(p);
  ASSERT_EQ(truth.workers.size(), 1u);
  const auto& accounts = truth.workers.begin()->second;
  EXPECT_EQ(accounts.size(), 10u);
  EXPECT_EQ(sc.corpus.reviews_of_product(p).size(), 10u);

  const auto g = build_co_activity_graph(sc.corpus, p);
  EXPECT_EQ(g.node_count(), 10u);
  EXPECT_EQ(g.edge_count(), 45u);

  const auto part = partition_product(sc.corpus, p, {});
  ASSERT_EQ(part.components.size(), 1u);
  EXPECT_EQ(std::set<std::string>(part.components[0].accounts.begin(), part.components[0].accounts.end()), accounts);
  EXPECT_TRUE(part.honest.empty());
}

TEST(Synth, SameSeedSameScenario) {
  const auto a = generate(small_scenario(11));
  const auto b = generate(small_scenario(11));
  EXPECT_EQ(a.corpus, b.corpus);
  EXPECT_EQ(a.log, b.log);
  std::ostringstream ga, gb;
  write_ground_truth(ga, a.truth);
  write_ground_truth(gb, b.truth);
  EXPECT_EQ(ga.str(), gb.str());
  EXPECT_FALSE(generate(small_scenario(12)).corpus == a.corpus);
}

TEST(Synth, PlantedStructureMatchesConfig) {
  const auto cfg = small_scenario(13);
  const auto sc = generate(cfg);
  EXPECT_EQ(sc.products().size(), cfg.n_products);
  for (const auto& [p, t] : sc.truth.products) {
    std::set<std::string> seen;
    for (const auto& [w, accounts] : t.workers) {
      const auto reviews = std::count_if(sc.corpus.reviews_of_product(p).begin(), sc.corpus.reviews_of_product(p).end(),
                                         [&](std::size_t i) { return accounts.contains(sc.corpus.reviews()[i].account_id); });
      EXPECT_TRUE(cfg.reviews_per_worker_per_product.contains(reviews)) << p << " " << w;
      for (const auto& a : accounts) {
        EXPECT_EQ(sc.corpus.worker_of(a), w);
        EXPECT_TRUE(seen.insert(a).second);
      }
    }
    for (const auto& h : t.honest) EXPECT_FALSE(sc.corpus.worker_of(h).has_value());
  }
}

TEST(Synth, InfeasibleConfigsAreRejected) {
  auto c = one_worker_one_product();
  c.reviews_per_worker_per_product = {11, 11};  // more reviews than accounts
  EXPECT_THROW(generate(c), ConfigError);
  c = one_worker_one_product();
  c.workers_per_fraud_product = {2, 2};
  EXPECT_THROW(generate(c), ConfigError);
  c = one_worker_one_product();
  c.fraud_product_fraction = 1.5;
  EXPECT_THROW(generate(c), ConfigError);
}

TEST(GroundTruth, RoundTrip) {
  const auto sc = generate(small_scenario(14));
  std::stringstream io;
  write_ground_truth(io, sc.truth);
  const auto back = read_ground_truth(io);
  EXPECT_EQ(back.products, sc.truth.products);
}

TEST(GroundTruth, DuplicatesAreRejected) {
  std::istringstream twice(R"({"product_id":"P","workers":{"W1":["a"]},"honest":[]})"
                           "\n"
                           R"({"product_id":"P","workers":{},"honest":["b"]})");
  EXPECT_THROW(read_ground_truth(twice), ParseError);
  std::istringstream shared(R"({"product_id":"P","workers":{"W1":["a"],"W2":["a"]},"honest":[]})");
  EXPECT_THROW(read_ground_truth(shared), ParseError);
}

// ---------------------------------------------------------------------------
// Settings and pipeline configuration

TEST(Settings, ParsesCommentsOverridesAndRanges) {
  std::istringstream in("# comment\n mcdense.eta = 6 \n\nsynth.accounts_per_worker=20..40\nmcdense.eta=7\n");
  const auto s = Settings::parse(in);
  EXPECT_EQ(s.get_int("mcdense.eta", 5), 7);
  EXPECT_EQ(s.get_range("synth.accounts_per_worker", {}), (Range{20, 40}));
  EXPECT_EQ(s.get_int("missing", 3), 3);
  EXPECT_TRUE(s.unused().empty());
}

TEST(Settings, BadValuesNameTheirKey) {
  Settings s;
  s.set("a", "x1");
  s.set("b", "nope");
  s.set("r", "9..2");
  EXPECT_THROW(s.get_int("a", 0), ConfigError);
  EXPECT_THROW(s.get_bool("b", false), ConfigError);
  EXPECT_THROW(s.get_range("r", {}), ConfigError);
  std::istringstream in("ok=1\nbroken line\n");
  try {
    Settings::parse(in, "cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos);
  }
}

TEST(PipelineConfig, UnknownKeysAreLeftUnread) {
  Settings s;
  s.set("mcdense.etta", "4");
  PipelineConfig::from_settings(s);
  EXPECT_EQ(s.unused(), std::vector<std::string>{"mcdense.etta"});
}

TEST(PipelineConfig, RationalsAndValidation) {
  EXPECT_EQ(parse_rational("k", "2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("k", "0.5"), Rational(1, 2));
  EXPECT_THROW(parse_rational("k", "1/0"), ConfigError);
  for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{{"mcdense.scope", "everything"},
                                                                            {"mcdense.tau", "3/2"},
                                                                            {"detect.algorithm", "louvain"},
                                                                            {"attribute.classifier", "svm"},
                                                                            {"gba.holdout", "2"},
                                                                            {"run.threads", "0"}}) {
    Settings s;
    s.set(k, v);
    EXPECT_THROW(PipelineConfig::from_settings(s), ConfigError) << k;
  }
}

TEST(PipelineConfig, HashIgnoresPathsButNotParameters) {
  Settings a;
  const auto base = PipelineConfig::from_settings(a).hash();
  EXPECT_EQ(base.size(), 16u);
  a.set("paths.output", "/tmp/elsewhere");
  a.set("paths.corpus", "x.jsonl");
  EXPECT_EQ(PipelineConfig::from_settings(a).hash(), base);
  a.set("mcdense.tau", "0.5");
  EXPECT_EQ(PipelineConfig::from_settings(a).hash(), base);
  a.set("mcdense.eta", "6");
  EXPECT_NE(PipelineConfig::from_settings(a).hash(), base);
}

// ---------------------------------------------------------------------------
// Benchmark

TEST(Benchmark, SummaryMatchesItsOwnRecords) {
  BenchmarkConfig cfg;
  cfg.embedding = false;
  const auto sc = generate(small_scenario(15));
  const auto rep = benchmark(sc, cfg);
  const auto j = nlohmann::json::parse(to_json(rep).dump());
  for (const auto* algo : {"mcdense", "dsg"}) {
    const auto& d = j["detection"][algo];
    std::size_t fraud = 0, covered = 0, honest = 0, flagged = 0;
    for (const auto& p : d["products"]) {
      const bool is_fraud = sc.truth.products.at(p["product_id"]).fraud();
      EXPECT_EQ(p["fraud"], is_fraud);
      if (is_fraud) {
        ++fraud;
        covered += p["covered"].get<bool>();
      } else {
        ++honest;
        flagged += p["suspicious_components"].get<std::size_t>() > 0;
      }
    }
    EXPECT_EQ(d["fraud_products"], fraud) << algo;
    EXPECT_EQ(d["covered_products"], covered) << algo;
    EXPECT_EQ(d["honest_products"], honest) << algo;
    EXPECT_EQ(d["flagged_honest_products"], flagged) << algo;
  }
  std::size_t top1 = 0, n = 0;
  for (const auto& r : j["attribution"]["leave_one_out_records"]) {
    const auto p = instance_prediction_from_json(r);
    ++n;
    top1 += !p.abstained && p.ranked.front().worker_id == p.true_worker;
  }
  EXPECT_EQ(j["attribution"]["leave_one_out"]["instances"], n);
  EXPECT_EQ(j["attribution"]["leave_one_out"]["top1"], top1);
  EXPECT_TRUE(j["guilt_by_association"].is_null());
}

TEST(Benchmark, SingleCliqueIsFullyCovered) {
  BenchmarkConfig cfg;
  cfg.embedding = false;
  const auto rep = benchmark(generate(one_worker_one_product()), cfg);
  EXPECT_EQ(rep.mcdense.fraud_products, 1u);
  EXPECT_EQ(rep.mcdense.covered, 1u);
  EXPECT_EQ(rep.dsg.covered, 1u);
  EXPECT_TRUE(rep.loo.empty());
}

TEST(Benchmark, HonestProductsStayUnattributed) {
  auto c = small_scenario(16);
  c.n_products = 20;
  c.fraud_product_fraction = 0.25;
  BenchmarkConfig cfg;
  cfg.embedding = false;
  const auto sc = generate(c);
  const auto rep = benchmark(sc, cfg);
  std::size_t honest = 0, clean = 0;
  for (const auto& p : rep.end_to_end)
    if (!sc.truth.products.at(p.product_id).fraud()) {
      ++honest;
      clean += p.workers.empty();
    }
  ASSERT_GT(honest, 0u);
  EXPECT_GE(double(clean), 0.9 * double(honest));
  EXPECT_EQ(honest - clean, rep.honest_products_attributed);
}

TEST(Benchmark, GuiltByAssociationReportsHeldOutAccounts) {
  BenchmarkConfig cfg;
  cfg.walk = small_walk();
  const auto sc = generate(small_scenario(17));
  const auto rep = benchmark(sc, cfg);
  ASSERT_TRUE(rep.gba.has_value());
  EXPECT_EQ(rep.gba->held_out.size(), static_cast<std::size_t>(std::llround(0.2 * double(rep.gba->labelled))));
  for (const auto& r : rep.gba->held_out) EXPECT_EQ(sc.corpus.worker_of(r.account), r.true_worker);
  const auto [macro, micro] = gba_f1(rep.gba->held_out);
  EXPECT_DOUBLE_EQ(macro, rep.gba->macro_f1);
  EXPECT_DOUBLE_EQ(micro, rep.gba->micro_f1);
  RecordProperty("gba_macro_f1", std::to_string(rep.gba->macro_f1));
}

TEST(GbaF1, HandCounts) {
  const std::vector<GbaRecord> recs = {{"a", "W1", "W1", 1}, {"b", "W1", "W2", 1}, {"c", "W2", "W2", 1}, {"d", "W2", "", 0}};
  const auto [macro, micro] = gba_f1(recs);
  // W1: p 1, r 1/2 -> 2/3; W2: p 1/2, r 1/2 -> 1/2; micro: p 2/3, r 1/2 -> 4/7
  EXPECT_NEAR(macro, (2.0 / 3 + 0.5) / 2, 1e-12);
  EXPECT_NEAR(micro, 4.0 / 7, 1e-12);
}

// ---------------------------------------------------------------------------
// Command line

class Cli : public ::testing::Test {
 protected:
  TempDir dir{"cli"};
  std::string out(const std::string& sub) const { return dir.file(sub); }
  std::string small_synth() const {
    return " --set synth.workers=3 --set synth.products=6 --set synth.background_products=100";
  }
  std::string small_embed() const {
    return " --set embed.gamma=10 --set embed.walk_len=20 --set embed.dims=16 --set embed.epochs=2";
  }
};

TEST_F(Cli, SynthThenBenchmarkOnTheFiles) {
  ASSERT_EQ(cli("synth -o " + out("s") + small_synth()), 0);
  ASSERT_EQ(cli("benchmark -o " + out("b") + " --corpus " + out("s/reviews.jsonl") + " --attributions " +
                out("s/attributions.jsonl") + " --groundtruth " + out("s/groundtruth.jsonl") + small_embed()),
            0);
  const auto j = nlohmann::json::parse(slurp(out("b/benchmark.json")));
  EXPECT_EQ(j["command"], "benchmark");
  EXPECT_EQ(j["scenario"]["source"], "corpus");
  EXPECT_TRUE(j["results"]["detection"]["mcdense"]["fraud_products"].get<std::size_t>() > 0);
  const auto m = nlohmann::json::parse(slurp(out("b/benchmark.manifest.json")));
  EXPECT_EQ(m["config_hash"], j["config_hash"]);
  EXPECT_EQ(m["parameters"]["embed.dims"], "16");
}

TEST_F(Cli, DetectReportsShareOneSchema) {
  ASSERT_EQ(cli("synth -o " + out("s") + small_synth()), 0);
  const auto corpus = " --corpus " + out("s/reviews.jsonl");
  ASSERT_EQ(cli("detect -o " + out("d") + corpus + " --algorithm mcdense"), 0);
  ASSERT_EQ(cli("detect -o " + out("d") + corpus + " --algorithm dsg"), 0);
  const auto a = nlohmann::json::parse(slurp(out("d/detect_mcdense.json")));
  const auto b = nlohmann::json::parse(slurp(out("d/detect_dsg.json")));
  std::set<std::string> ka, kb;
  for (const auto& [k, v] : a.items()) ka.insert(k);
  for (const auto& [k, v] : b.items()) kb.insert(k);
  EXPECT_EQ(ka, kb);
  ASSERT_EQ(a["products"].size(), b["products"].size());
  for (std::size_t i = 0; i < a["products"].size(); ++i) {
    const auto p = partition_from_json(a["products"][i]);
    const auto q = partition_from_json(b["products"][i]);
    EXPECT_EQ(p.product_id, q.product_id);
    for (const auto& c : a["products"][i]["components"])
      for (const auto* key : {"accounts", "size", "triangle_density", "edge_density", "suspicious"})
        EXPECT_TRUE(c.contains(key)) << key;
  }
}

TEST_F(Cli, RerunsAreByteIdentical) {
  for (const auto* run : {"r1", "r2"}) {
    ASSERT_EQ(cli("synth -o " + out(run) + small_synth()), 0);
    ASSERT_EQ(cli("detect -o " + out(run) + " --corpus " + out(std::string(run) + "/reviews.jsonl")), 0);
    ASSERT_EQ(cli("train -o " + out(run) + " --corpus " + out(std::string(run) + "/reviews.jsonl") +
                  " --attributions " + out(std::string(run) + "/attributions.jsonl")),
              0);
    ASSERT_EQ(cli("deanonymize -o " + out(run) + " --corpus " + out(std::string(run) + "/reviews.jsonl")), 0);
  }
  for (const auto* f : {"reviews.jsonl", "attributions.jsonl", "groundtruth.jsonl", "detect_mcdense.json", "model.json",
                        "deanonymize.json"})
    EXPECT_EQ(slurp(out(std::string("r1/") + f)), slurp(out(std::string("r2/") + f))) << f;
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cli("--help >/dev/null"), 0);
  EXPECT_EQ(cli("no-such-command"), 1);
  EXPECT_EQ(cli("detect -o " + out("x") + " --set mcdense.etta=3 --corpus whatever"), 1);
  EXPECT_EQ(cli("detect -o " + out("x")), 1);
  EXPECT_EQ(cli("detect -o " + out("x") + " --corpus " + out("missing.jsonl")), 2);
  {
    std::ofstream f(out("bad.jsonl"));
    f << R"({"review_id":"r1","account_id":"a","product_id":"P","text":"","rating":9,"timestamp":1})" << '\n';
  }
  EXPECT_EQ(cli("ingest -o " + out("x") + " --corpus " + out("bad.jsonl")), 2);
  const auto status = std::system((std::string(FRAUDTRACE_CLI) + " ingest -o " + out("x") + " --corpus " +
                                   out("bad.jsonl") + " 2>" + out("err.txt"))
                                      .c_str());
  ASSERT_TRUE(WIFEXITED(status));
  const auto err = nlohmann::json::parse(slurp(out("err.txt")));
  EXPECT_EQ(err["error"]["type"], "parse");
  EXPECT_EQ(err["error"]["line"], 1);
  EXPECT_EQ(err["error"]["exit_code"], 2);
}
