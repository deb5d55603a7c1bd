#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudtrace/classify.hpp"
#include "fraudtrace/corpus.hpp"
#include "fraudtrace/detect.hpp"
#include "fraudtrace/metrics.hpp"
#include "fraudtrace/stylo.hpp"

namespace fraudtrace {

struct AttributeConfig {
  std::string classifier = "knn";
  std::size_t k = 5;
  double abstain_threshold = 0.5;
  StyloConfig stylo;

  void validate() const {
    if (abstain_threshold < 0 || abstain_threshold > 1) throw ConfigError("attribute.abstain_threshold must be in [0,1]");
    if (k == 0) throw ConfigError("attribute.k must be >= 1");
    if (stylo.min_reviews == 0) throw ConfigError("stylo.min_reviews must be >= 1");
  }
};

struct WorkerProfile {
  std::string worker_id;
  std::set<std::string> accounts;
  std::vector<std::string> instance_ids;
};

/// Frozen feature space plus a classifier over worker ids.
struct AttributionModel {
  FeatureSpace space;
  std::unique_ptr<Classifier> classifier;
  std::vector<WorkerProfile> workers;

  std::vector<RankedWorker> rank(const ReviewInstance& inst) const {
    const auto fv = extract_features(inst, space);
    return classifier->rank(fv.values);
  }

  nlohmann::json to_json() const {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : workers) ws.push_back({{"worker_id", w.worker_id}, {"accounts", w.accounts}, {"instances", w.instance_ids}});
    return {{"space",
             {{"letter2", space.letter2},
              {"letter3", space.letter3},
              {"word2", space.word2},
              {"word3", space.word3},
              {"pos1", space.pos1},
              {"pos2", space.pos2},
              {"pos3", space.pos3}}},
            {"classifier", classifier->to_json()},
            {"workers", ws}};
  }

  static AttributionModel from_json(const nlohmann::json& j) {
    AttributionModel m;
    const auto& s = j.at("space");
    m.space = FeatureSpace{s.at("letter2"), s.at("letter3"), s.at("word2"), s.at("word3"),
                           s.at("pos1"),    s.at("pos2"),    s.at("pos3")};
    m.classifier = classifier_from_json(j.at("classifier"));
    for (const auto& w : j.at("workers"))
      m.workers.push_back({w.at("worker_id"), w.at("accounts"), w.at("instances")});
    return m;
  }
};

/// Trains on labelled instances whose style counts are already known.
inline AttributionModel train_attributor(std::span<const ReviewInstance> instances, std::span<const StyleCounts> counts,
                                         FeatureSpace space, const AttributeConfig& cfg = {}) {
  cfg.validate();
  if (counts.size() != instances.size()) throw Error("instance and count lists differ in length");
  std::map<std::string, WorkerProfile> profiles;
  Matrix x;
  std::vector<std::string> y;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    auto& p = profiles[inst.worker_id];
    p.worker_id = inst.worker_id;
    p.accounts.insert(inst.account_ids.begin(), inst.account_ids.end());
    p.instance_ids.push_back(inst.instance_id);
    x.push_back(vectorize(counts[i], space).values);
    y.push_back(inst.worker_id);
  }
  if (profiles.size() < 2)
    throw Error("attribution training needs at least 2 workers, got " + std::to_string(profiles.size()));
  AttributionModel m;
  m.space = std::move(space);
  m.classifier = make_classifier(cfg.classifier, cfg.k);
  m.classifier->fit(x, y);
  for (auto& [id, p] : profiles) m.workers.push_back(std::move(p));
  return m;
}

/// Trains on labelled instances in a given space. Needs >= 2 workers.
inline AttributionModel train_attributor(std::span<const ReviewInstance> instances, FeatureSpace space,
                                         const AttributeConfig& cfg = {}) {
  std::vector<StyleCounts> counts;
  counts.reserve(instances.size());
  for (const auto& i : instances) counts.push_back(count_style(i));
  return train_attributor(instances, counts, std::move(space), cfg);
}

/// Builds the feature space from the training instances, then trains.
inline AttributionModel train_attributor(std::span<const ReviewInstance> instances, const AttributeConfig& cfg = {}) {
  return train_attributor(instances, build_feature_space(instances, cfg.stylo), cfg);
}

struct AttributionResult {
  std::string component_id;
  std::string product_id;
  std::vector<std::string> accounts;
  std::size_t review_count = 0;
  std::vector<RankedWorker> ranked;
  std::optional<std::string> attributed;
  bool abstained = false;
  bool tie = false;  // ranks 1 and 2 have equal probability
  std::string reason;
};

/// The reviews a component's accounts posted on its product, as one instance.
inline ReviewInstance component_instance(const FraudComponent& component, const Corpus& corpus,
                                         const std::string& instance_id) {
  ReviewInstance inst{instance_id, kCandidateWorker, component.product_id, {}, component.accounts};
  std::vector<const Review*> reviews;
  for (auto i : corpus.reviews_of_product(component.product_id)) {
    const auto& r = corpus.reviews()[i];
    if (std::binary_search(component.accounts.begin(), component.accounts.end(), r.account_id)) reviews.push_back(&r);
  }
  std::sort(reviews.begin(), reviews.end(), [](const Review* a, const Review* b) {
    return std::tie(a->timestamp, a->review_id) < std::tie(b->timestamp, b->review_id);
  });
  for (auto* r : reviews) inst.texts.push_back(r->text);
  return inst;
}

/// Ranks the workers for one component. Abstains when the component has
/// fewer than `min_reviews` reviews on its product or when the best
/// probability is below the abstain threshold. Ties at rank 1 resolve to
/// the lexicographically smaller worker id and set `tie`.
inline AttributionResult attribute_component(const FraudComponent& component, const Corpus& corpus,
                                             const AttributionModel& model, const AttributeConfig& cfg = {},
                                             const std::string& component_id = {}) {
  cfg.validate();
  AttributionResult res;
  res.component_id = component_id.empty() ? component.product_id + "#0" : component_id;
  res.product_id = component.product_id;
  res.accounts = component.accounts;
  const auto inst = component_instance(component, corpus, res.component_id);
  res.review_count = inst.texts.size();
  if (res.review_count < cfg.stylo.min_reviews) {
    res.abstained = true;
    res.reason = "insufficient reviews";
    return res;
  }
  res.ranked = model.rank(inst);
  res.tie = res.ranked.size() >= 2 && res.ranked[0].probability == res.ranked[1].probability;
  if (res.ranked.front().probability < cfg.abstain_threshold) {
    res.abstained = true;
    res.reason = "low confidence";
    return res;
  }
  res.attributed = res.ranked.front().worker_id;
  return res;
}

struct ProductAttribution {
  std::string product_id;
  Partition partition;
  std::vector<AttributionResult> results;  // one per suspicious component
  std::set<std::string> workers;           // distinct attributed workers
};

/// Attributes each component of `partition` whose triangle density reaches tau.
inline ProductAttribution attribute_partition(const Corpus& corpus, Partition partition, const DensityConfig& density,
                                              const AttributionModel& model, const AttributeConfig& cfg = {}) {
  ProductAttribution out;
  out.product_id = partition.product_id;
  out.partition = std::move(partition);
  std::size_t idx = 0;
  for (const auto& c : suspicious_components(out.partition, density.tau)) {
    auto res = attribute_component(c, corpus, model, cfg, out.product_id + "#" + std::to_string(idx++));
    if (res.attributed) out.workers.insert(*res.attributed);
    out.results.push_back(std::move(res));
  }
  return out;
}

/// Detect, keep components with triangle density >= tau, attribute each.
inline ProductAttribution deanonymize_product(const Corpus& corpus, const std::string& product_id,
                                              const DensityConfig& density, const AttributionModel& model,
                                              const AttributeConfig& cfg = {}, Algorithm algo = Algorithm::mcdense) {
  return attribute_partition(corpus, detect_product(corpus, product_id, density, algo), density, model, cfg);
}

/// Leave-one-out over instances: each instance is ranked by a model whose
/// feature space and classifier were built without it.
inline std::vector<InstancePrediction> leave_one_out(std::span<const ReviewInstance> instances,
                                                     const AttributeConfig& cfg = {}) {
  cfg.validate();
  std::vector<StyleCounts> counts;
  counts.reserve(instances.size());
  for (const auto& i : instances) counts.push_back(count_style(i));
  std::vector<InstancePrediction> out;
  for (std::size_t held = 0; held < instances.size(); ++held) {
    std::vector<StyleCounts> train_counts;
    std::vector<std::string> y;
    for (std::size_t i = 0; i < instances.size(); ++i)
      if (i != held) {
        train_counts.push_back(counts[i]);
        y.push_back(instances[i].worker_id);
      }
    const auto space = build_feature_space(std::span<const StyleCounts>(train_counts), cfg.stylo);
    Matrix x;
    for (const auto& c : train_counts) x.push_back(vectorize(c, space).values);
    auto clf = make_classifier(cfg.classifier, cfg.k);
    clf->fit(x, y);
    InstancePrediction pred{instances[held].instance_id, instances[held].product_id, instances[held].worker_id,
                            clf->rank(vectorize(counts[held], space).values), false};
    out.push_back(std::move(pred));
  }
  return out;
}

}  // namespace fraudtrace
