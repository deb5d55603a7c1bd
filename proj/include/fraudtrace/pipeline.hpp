#pragma once

#include <locale>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudtrace/attribute.hpp"
#include "fraudtrace/benchmark.hpp"
#include "fraudtrace/config.hpp"
#include "fraudtrace/detect.hpp"
#include "fraudtrace/embed.hpp"
#include "fraudtrace/synth.hpp"

namespace fraudtrace {

inline constexpr const char* kVersion = "0.1.0";

/// "p/q" or a decimal.
inline Rational parse_rational(const std::string& key, const std::string& v) {
  if (auto slash = v.find('/'); slash != std::string::npos) {
    const auto n = detail::parse_int(key, detail::trim(v.substr(0, slash)));
    const auto d = detail::parse_int(key, detail::trim(v.substr(slash + 1)));
    if (d == 0) throw ConfigError(key + ": zero denominator");
    return Rational(n, d);
  }
  Settings s;
  s.set(key, v);
  return Rational::from_double(s.get_double(key, 0));
}

/// Every tunable of the command-line pipeline, read from dotted settings.
struct PipelineConfig {
  std::string corpus_path;
  std::string attributions_path;
  std::string groundtruth_path;
  std::string output_dir = "out";
  DensityConfig density;
  Algorithm algorithm = Algorithm::mcdense;
  WalkConfig walk;
  GbaConfig gba;
  double gba_holdout = 0.2;
  AttributeConfig attribute;
  CoverageParams coverage;
  ScenarioConfig synth;
  std::size_t threads = 1;
  std::uint64_t seed = 1;

  static PipelineConfig from_settings(const Settings& s) {
    PipelineConfig c;
    c.corpus_path = s.get_string("paths.corpus", c.corpus_path);
    c.attributions_path = s.get_string("paths.attributions", c.attributions_path);
    c.groundtruth_path = s.get_string("paths.groundtruth", c.groundtruth_path);
    c.output_dir = s.get_string("paths.output", c.output_dir);

    c.seed = static_cast<std::uint64_t>(s.get_int("run.seed", 1));
    c.threads = s.get_size("run.threads", 1);
    if (c.threads == 0) throw ConfigError("run.threads must be >= 1");

    c.density.eta = s.get_size("mcdense.eta", c.density.eta);
    if (s.has("mcdense.tau")) c.density.tau = parse_rational("mcdense.tau", s.get_string("mcdense.tau", ""));
    const auto scope = s.get_string("mcdense.scope", "beyond_target");
    if (scope == "beyond_target")
      c.density.scope = CoActivityScope::beyond_target;
    else if (scope == "all_products")
      c.density.scope = CoActivityScope::all_products;
    else
      throw ConfigError("mcdense.scope must be beyond_target or all_products");
    c.density.min_edge_weight = s.get_int("mcdense.min_edge_weight", c.density.min_edge_weight);
    c.density.prune_triangle_free = s.get_bool("mcdense.prune_triangle_free", c.density.prune_triangle_free);
    c.density.validate();
    c.algorithm = parse_algorithm(s.get_string("detect.algorithm", "mcdense"));

    c.walk.gamma = s.get_size("embed.gamma", c.walk.gamma);
    c.walk.walk_len = s.get_size("embed.walk_len", c.walk.walk_len);
    c.walk.window = s.get_size("embed.window", c.walk.window);
    c.walk.dims = s.get_size("embed.dims", c.walk.dims);
    c.walk.negatives = s.get_size("embed.negatives", c.walk.negatives);
    c.walk.epochs = s.get_size("embed.epochs", c.walk.epochs);
    c.walk.learning_rate = s.get_double("embed.learning_rate", c.walk.learning_rate);
    c.walk.threads = s.get_size("embed.threads", c.walk.threads);
    c.walk.seed = c.seed;
    c.walk.validate();
    c.gba.threshold = s.get_double("gba.threshold", c.gba.threshold);
    c.gba.classifier = s.get_string("gba.classifier", c.gba.classifier);
    c.gba.k = s.get_size("gba.k", c.gba.k);
    c.gba_holdout = s.get_double("gba.holdout", c.gba_holdout);
    if (c.gba_holdout < 0 || c.gba_holdout > 1) throw ConfigError("gba.holdout must be in [0,1]");

    c.attribute.classifier = s.get_string("attribute.classifier", c.attribute.classifier);
    c.attribute.k = s.get_size("attribute.k", c.attribute.k);
    c.attribute.abstain_threshold = s.get_double("attribute.abstain_threshold", c.attribute.abstain_threshold);
    c.attribute.stylo.letter2 = s.get_size("stylo.letter2", c.attribute.stylo.letter2);
    c.attribute.stylo.letter3 = s.get_size("stylo.letter3", c.attribute.stylo.letter3);
    c.attribute.stylo.word2 = s.get_size("stylo.word2", c.attribute.stylo.word2);
    c.attribute.stylo.word3 = s.get_size("stylo.word3", c.attribute.stylo.word3);
    c.attribute.stylo.min_reviews = s.get_size("stylo.min_reviews", c.attribute.stylo.min_reviews);
    c.attribute.validate();
    make_classifier(c.attribute.classifier, c.attribute.k);
    make_classifier(c.gba.classifier, c.gba.k);

    c.coverage.p1 = s.get_double("coverage.p1", c.coverage.p1);
    c.coverage.p2 = s.get_double("coverage.p2", c.coverage.p2);
    c.coverage.validate();

    c.synth = ScenarioConfig::from_settings(s);
    if (!s.has("synth.seed")) c.synth.seed = c.seed;
    return c;
  }

  /// Effective parameter values (paths excluded), in key order.
  std::map<std::string, std::string> parameters() const {
    auto num = [](double x) {
      std::ostringstream o;
      o.imbue(std::locale::classic());
      o.precision(17);
      o << x;
      return o.str();
    };
    return {{"attribute.abstain_threshold", num(attribute.abstain_threshold)},
            {"attribute.classifier", attribute.classifier},
            {"attribute.k", std::to_string(attribute.k)},
            {"coverage.p1", num(coverage.p1)},
            {"coverage.p2", num(coverage.p2)},
            {"detect.algorithm", algorithm_name(algorithm)},
            {"embed.dims", std::to_string(walk.dims)},
            {"embed.epochs", std::to_string(walk.epochs)},
            {"embed.gamma", std::to_string(walk.gamma)},
            {"embed.learning_rate", num(walk.learning_rate)},
            {"embed.negatives", std::to_string(walk.negatives)},
            {"embed.threads", std::to_string(walk.threads)},
            {"embed.walk_len", std::to_string(walk.walk_len)},
            {"embed.window", std::to_string(walk.window)},
            {"gba.classifier", gba.classifier},
            {"gba.holdout", num(gba_holdout)},
            {"gba.k", std::to_string(gba.k)},
            {"gba.threshold", num(gba.threshold)},
            {"mcdense.eta", std::to_string(density.eta)},
            {"mcdense.min_edge_weight", std::to_string(density.min_edge_weight)},
            {"mcdense.prune_triangle_free", density.prune_triangle_free ? "true" : "false"},
            {"mcdense.scope", density.scope == CoActivityScope::beyond_target ? "beyond_target" : "all_products"},
            {"mcdense.tau", density.tau.str()},
            {"run.seed", std::to_string(seed)},
            {"stylo.letter2", std::to_string(attribute.stylo.letter2)},
            {"stylo.letter3", std::to_string(attribute.stylo.letter3)},
            {"stylo.min_reviews", std::to_string(attribute.stylo.min_reviews)},
            {"stylo.word2", std::to_string(attribute.stylo.word2)},
            {"stylo.word3", std::to_string(attribute.stylo.word3)},
            {"synth.accounts_per_worker", synth.accounts_per_worker.str()},
            {"synth.background_products", std::to_string(synth.background_products)},
            {"synth.collaboration_rate", num(synth.collaboration_rate)},
            {"synth.cover_products_per_worker", std::to_string(synth.cover_products_per_worker)},
            {"synth.fraud_product_fraction", num(synth.fraud_product_fraction)},
            {"synth.honest_background_reviews", synth.honest_background_reviews.str()},
            {"synth.honest_cross_rate", num(synth.honest_cross_rate)},
            {"synth.honest_reviewers_per_product", synth.honest_reviewers_per_product.str()},
            {"synth.majority_fraction", num(synth.majority_fraction)},
            {"synth.products", std::to_string(synth.n_products)},
            {"synth.reviews_per_worker_per_product", synth.reviews_per_worker_per_product.str()},
            {"synth.seed", std::to_string(synth.seed)},
            {"synth.workers", std::to_string(synth.n_workers)},
            {"synth.workers_per_fraud_product", synth.workers_per_fraud_product.str()}};
  }

  /// FNV-1a over "key=value\n" lines of `parameters()`, as 16 hex digits.
  std::string hash() const {
    std::string text;
    for (const auto& [k, v] : parameters()) text += k + "=" + v + "\n";
    return hex64(fnv1a(text));
  }

  BenchmarkConfig benchmark_config() const {
    BenchmarkConfig b;
    b.density = density;
    b.attribute = attribute;
    b.coverage = coverage;
    b.walk = walk;
    b.gba = gba;
    b.gba_holdout = gba_holdout;
    b.threads = threads;
    return b;
  }
};

// ---------------------------------------------------------------------------
// Report fragments

inline nlohmann::json to_json(const Rational& r) { return {{"fraction", r.str()}, {"value", r.value()}}; }

inline nlohmann::json to_json(const FraudComponent& c, const DensityConfig& cfg) {
  return {{"accounts", c.accounts},
          {"size", c.accounts.size()},
          {"triangle_density", to_json(c.triangle_density)},
          {"edge_density", to_json(c.edge_density)},
          {"suspicious", c.triangle_density >= cfg.tau}};
}

inline nlohmann::json to_json(const Partition& p, const DensityConfig& cfg) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : p.components) comps.push_back(to_json(c, cfg));
  return {{"product_id", p.product_id},
          {"reviewers", p.honest.size() + [&] {
             std::size_t n = 0;
             for (const auto& c : p.components) n += c.accounts.size();
             return n;
           }()},
          {"components", comps},
          {"honest", p.honest}};
}

inline Partition partition_from_json(const nlohmann::json& j) {
  Partition p;
  p.product_id = j.at("product_id").get<std::string>();
  p.honest = j.at("honest").get<std::vector<std::string>>();
  for (const auto& c : j.at("components")) {
    FraudComponent fc;
    fc.product_id = p.product_id;
    fc.accounts = c.at("accounts").get<std::vector<std::string>>();
    auto rat = [](const nlohmann::json& r) { return parse_rational("density", r.at("fraction").get<std::string>()); };
    fc.triangle_density = rat(c.at("triangle_density"));
    fc.edge_density = rat(c.at("edge_density"));
    p.components.push_back(std::move(fc));
  }
  return p;
}

inline nlohmann::json to_json(const AttributionResult& r) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& w : r.ranked) ranked.push_back({{"worker_id", w.worker_id}, {"probability", w.probability}});
  return {{"component_id", r.component_id},
          {"product_id", r.product_id},
          {"accounts", r.accounts},
          {"review_count", r.review_count},
          {"ranked", ranked},
          {"attributed", r.attributed ? nlohmann::json(*r.attributed) : nlohmann::json(nullptr)},
          {"abstained", r.abstained},
          {"tie", r.tie},
          {"reason", r.reason}};
}

inline nlohmann::json to_json(const ProductAttribution& pa, const DensityConfig& cfg) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : pa.results) results.push_back(to_json(r));
  return {{"product_id", pa.product_id},
          {"partition", to_json(pa.partition, cfg)},
          {"results", results},
          {"workers", pa.workers}};
}

}  // namespace fraudtrace
