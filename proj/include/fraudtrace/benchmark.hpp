#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudtrace/attribute.hpp"
#include "fraudtrace/config.hpp"
#include "fraudtrace/detect.hpp"
#include "fraudtrace/embed.hpp"
#include "fraudtrace/metrics.hpp"
#include "fraudtrace/synth.hpp"

namespace fraudtrace {

struct BenchmarkConfig {
  DensityConfig density;
  AttributeConfig attribute;
  CoverageParams coverage;
  WalkConfig walk;
  GbaConfig gba;
  double gba_holdout = 0.2;
  bool embedding = true;
  std::size_t threads = 1;
};

struct ProductDetection {
  std::string product_id;
  bool fraud = false;
  std::size_t suspicious = 0;       // components with density >= tau
  Rational covered_workers{0, 1};   // fraction of workers p2-covered; fraud products only
  bool covered = false;
};

struct DetectionSummary {
  Algorithm algorithm = Algorithm::mcdense;
  std::size_t fraud_products = 0;
  std::size_t covered = 0;
  std::size_t honest_products = 0;
  std::size_t flagged_honest = 0;  // honest products with any suspicious component
  std::vector<ProductDetection> products;
  std::vector<Partition> partitions;

  double coverage_rate() const { return fraud_products ? double(covered) / double(fraud_products) : 0.0; }
  double flagged_rate() const { return honest_products ? double(flagged_honest) / double(honest_products) : 0.0; }
};

struct GbaRecord {
  std::string account;
  std::string true_worker;
  std::string predicted;  // empty when below the confidence threshold
  double score = 0;
};

struct GbaSummary {
  std::size_t nodes = 0;
  std::size_t labelled = 0;
  std::vector<GbaRecord> held_out;
  std::vector<double> epoch_loss;
  double macro_f1 = 0;
  double micro_f1 = 0;
};

struct BenchmarkReport {
  DetectionSummary mcdense;
  DetectionSummary dsg;
  std::vector<InstancePrediction> loo;
  AttributionEval loo_eval;
  std::vector<ProductPrediction> end_to_end;
  AttributionEval end_to_end_eval;
  std::size_t honest_products_attributed = 0;
  std::optional<GbaSummary> gba;
};

/// Per-worker F1 over held-out nodes; unlabelled predictions count as misses.
inline std::pair<double, double> gba_f1(std::span<const GbaRecord> records) {
  std::map<std::string, WorkerScore> per;
  std::size_t correct = 0, predicted = 0;
  for (const auto& r : records) {
    ++per[r.true_worker].true_count;
    if (r.predicted.empty()) continue;
    ++predicted;
    ++per[r.predicted].predicted_count;
    if (r.predicted == r.true_worker) {
      ++per[r.predicted].correct;
      ++correct;
    }
  }
  auto f1 = [](double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; };
  double macro = 0;
  std::size_t classes = 0;
  for (const auto& [w, s] : per) {
    if (s.true_count == 0) continue;
    macro += f1(s.precision(), s.recall());
    ++classes;
  }
  const double micro_p = predicted ? double(correct) / double(predicted) : 0.0;
  const double micro_r = records.empty() ? 0.0 : double(correct) / double(records.size());
  return {classes ? macro / double(classes) : 0.0, f1(micro_p, micro_r)};
}

inline DetectionSummary run_detection(const Scenario& sc, const BenchmarkConfig& cfg, Algorithm algo) {
  DetectionSummary out;
  out.algorithm = algo;
  const auto products = sc.products();
  out.partitions.resize(products.size());
  out.products.resize(products.size());
  parallel_for(products.size(), cfg.threads, [&](std::size_t i) {
    out.partitions[i] = detect_product(sc.corpus, products[i], cfg.density, algo);
  });
  for (std::size_t i = 0; i < products.size(); ++i) {
    const auto& truth = sc.truth.products.at(products[i]);
    Partition flagged = out.partitions[i];
    flagged.components = suspicious_components(flagged, cfg.density.tau);
    auto& pd = out.products[i];
    pd.product_id = products[i];
    pd.fraud = truth.fraud();
    pd.suspicious = flagged.components.size();
    if (pd.fraud) {
      ++out.fraud_products;
      pd.covered_workers = covered_worker_fraction(truth, flagged, cfg.coverage.p2);
      pd.covered = p_coverage(truth, flagged, cfg.coverage);
      if (pd.covered) ++out.covered;
    } else {
      ++out.honest_products;
      if (pd.suspicious > 0) ++out.flagged_honest;
    }
  }
  return out;
}

/// Detection with both algorithms, leave-one-out instance attribution,
/// leave-one-product-out end-to-end de-anonymization and, optionally,
/// guilt by association on the union graph of the fraud products.
inline BenchmarkReport benchmark(const Scenario& sc, const BenchmarkConfig& cfg) {
  cfg.density.validate();
  cfg.attribute.validate();
  cfg.coverage.validate();
  BenchmarkReport rep;
  rep.mcdense = run_detection(sc, cfg, Algorithm::mcdense);
  rep.dsg = run_detection(sc, cfg, Algorithm::dsg);

  const auto grouping = group_instances(sc.corpus, cfg.attribute.stylo.min_reviews);
  const auto& instances = grouping.instances;
  std::set<std::string> workers;
  for (const auto& i : instances) workers.insert(i.worker_id);
  if (workers.size() >= 2) {
    rep.loo = leave_one_out(instances, cfg.attribute);
    rep.loo_eval = eval_attribution(rep.loo, {}, sc.truth);

    std::vector<StyleCounts> counts;
    for (const auto& i : instances) counts.push_back(count_style(i));
    const auto products = sc.products();
    rep.end_to_end.resize(products.size());
    parallel_for(products.size(), cfg.threads, [&](std::size_t p) {
      std::vector<ReviewInstance> train;
      std::vector<StyleCounts> train_counts;
      for (std::size_t i = 0; i < instances.size(); ++i)
        if (instances[i].product_id != products[p]) {
          train.push_back(instances[i]);
          train_counts.push_back(counts[i]);
        }
      auto space = build_feature_space(std::span<const StyleCounts>(train_counts), cfg.attribute.stylo);
      const auto model = train_attributor(train, train_counts, std::move(space), cfg.attribute);
      const auto res = attribute_partition(sc.corpus, rep.mcdense.partitions[p], cfg.density, model, cfg.attribute);
      rep.end_to_end[p] = {products[p], res.workers};
    });
    rep.end_to_end_eval = eval_attribution({}, rep.end_to_end, sc.truth);
    for (const auto& pred : rep.end_to_end)
      if (!sc.truth.products.at(pred.product_id).fraud() && !pred.workers.empty()) ++rep.honest_products_attributed;
  }

  if (cfg.embedding) {
    const auto fraud = sc.fraud_products();
    const auto graph = build_union_graph(sc.corpus, {fraud.begin(), fraud.end()});
    std::vector<std::string> labelled;
    std::set<std::string> label_set;
    for (const auto& a : graph.nodes())
      if (auto w = sc.corpus.worker_of(a)) {
        labelled.push_back(a);
        label_set.insert(*w);
      }
    if (label_set.size() >= 2) {
      GbaSummary g;
      const auto emb = embed_graph(graph, cfg.walk);
      Rng rng(cfg.walk.seed ^ 0x676261ULL);
      for (std::size_t i = labelled.size(); i > 1; --i) std::swap(labelled[i - 1], labelled[rng.below(i)]);
      const auto held = static_cast<std::size_t>(std::llround(cfg.gba_holdout * double(labelled.size())));
      std::map<std::string, std::string> train;
      std::set<std::string> query;
      for (std::size_t i = 0; i < labelled.size(); ++i) {
        if (i < held)
          query.insert(labelled[i]);
        else
          train[labelled[i]] = *sc.corpus.worker_of(labelled[i]);
      }
      const auto predicted = guilt_by_association(emb, train, query, cfg.gba);
      for (const auto& a : query) {
        GbaRecord r{a, *sc.corpus.worker_of(a), {}, 0};
        if (auto it = predicted.find(a); it != predicted.end()) {
          r.predicted = it->second.worker_id;
          r.score = it->second.score;
        }
        g.held_out.push_back(r);
      }
      g.nodes = graph.node_count();
      g.labelled = labelled.size();
      g.epoch_loss = emb.epoch_loss;
      std::tie(g.macro_f1, g.micro_f1) = gba_f1(g.held_out);
      rep.gba = std::move(g);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const DetectionSummary& d) {
  nlohmann::json products = nlohmann::json::array();
  for (const auto& p : d.products)
    products.push_back({{"product_id", p.product_id},
                        {"fraud", p.fraud},
                        {"suspicious_components", p.suspicious},
                        {"covered_workers", p.fraud ? p.covered_workers.str() : "n/a"},
                        {"covered", p.covered}});
  return {{"algorithm", algorithm_name(d.algorithm)},
          {"fraud_products", d.fraud_products},
          {"covered_products", d.covered},
          {"coverage_rate", d.coverage_rate()},
          {"honest_products", d.honest_products},
          {"flagged_honest_products", d.flagged_honest},
          {"flagged_rate", d.flagged_rate()},
          {"products", products}};
}

inline nlohmann::json to_json(const AttributionEval& ev) {
  nlohmann::json per_worker = nlohmann::json::object();
  for (const auto& [w, s] : ev.per_worker)
    per_worker[w] = {{"true", s.true_count},
                     {"predicted", s.predicted_count},
                     {"correct", s.correct},
                     {"precision", s.precision()},
                     {"recall", s.recall()}};
  auto level = [](const AppLevel& l) {
    return nlohmann::json{{"apps", l.apps}, {"at_least_one", l.at_least_one}, {"ge50", l.ge50}, {"ge70", l.ge70}, {"ge90", l.ge90}};
  };
  nlohmann::json per_app = nlohmann::json::object();
  for (const auto& [p, rp] : ev.per_app) per_app[p] = {{"recall", rp.first}, {"precision", rp.second}};
  return {{"instances", ev.instances},
          {"top1", ev.top1},
          {"top3", ev.top3},
          {"top5", ev.top5},
          {"top1_accuracy", ev.top_k_accuracy(1)},
          {"top3_accuracy", ev.top_k_accuracy(3)},
          {"top5_accuracy", ev.top_k_accuracy(5)},
          {"per_worker", per_worker},
          {"app_recall", level(ev.app_recall)},
          {"app_precision", level(ev.app_precision)},
          {"per_app", per_app}};
}

inline nlohmann::json to_json(const InstancePrediction& p) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& r : p.ranked) ranked.push_back({{"worker_id", r.worker_id}, {"probability", r.probability}});
  return {{"instance_id", p.instance_id},
          {"product_id", p.product_id},
          {"true_worker", p.true_worker},
          {"abstained", p.abstained},
          {"ranked", ranked}};
}

inline InstancePrediction instance_prediction_from_json(const nlohmann::json& j) {
  InstancePrediction p{j.at("instance_id"), j.at("product_id"), j.at("true_worker"), {}, j.at("abstained")};
  for (const auto& r : j.at("ranked")) p.ranked.push_back({r.at("worker_id"), r.at("probability")});
  return p;
}

inline nlohmann::json to_json(const BenchmarkReport& rep) {
  nlohmann::json loo = nlohmann::json::array();
  for (const auto& p : rep.loo) loo.push_back(to_json(p));
  nlohmann::json e2e = nlohmann::json::array();
  for (const auto& p : rep.end_to_end) e2e.push_back({{"product_id", p.product_id}, {"workers", p.workers}});
  nlohmann::json out = {{"detection", {{"mcdense", to_json(rep.mcdense)}, {"dsg", to_json(rep.dsg)}}},
                        {"attribution",
                         {{"leave_one_out", to_json(rep.loo_eval)},
                          {"leave_one_out_records", loo},
                          {"end_to_end", to_json(rep.end_to_end_eval)},
                          {"end_to_end_records", e2e},
                          {"honest_products_attributed", rep.honest_products_attributed}}}};
  if (rep.gba) {
    nlohmann::json held = nlohmann::json::array();
    for (const auto& r : rep.gba->held_out)
      held.push_back({{"account", r.account}, {"true_worker", r.true_worker}, {"predicted", r.predicted}, {"score", r.score}});
    out["guilt_by_association"] = {{"nodes", rep.gba->nodes},
                                   {"labelled", rep.gba->labelled},
                                   {"held_out", held},
                                   {"epoch_loss", rep.gba->epoch_loss},
                                   {"macro_f1", rep.gba->macro_f1},
                                   {"micro_f1", rep.gba->micro_f1}};
  } else {
    out["guilt_by_association"] = nullptr;
  }
  return out;
}

}  // namespace fraudtrace
