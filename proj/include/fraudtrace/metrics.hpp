#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fraudtrace/corpus.hpp"
#include "fraudtrace/mcdense.hpp"

namespace fraudtrace {

// ---------------------------------------------------------------------------
// Coverage

struct CoverageParams {
  double p1 = 0.9;  // fraction of workers that must be covered
  double p2 = 0.9;  // per-worker coverage threshold

  void validate() const {
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1) throw ConfigError("coverage p1/p2 must be in [0,1]");
  }
};

/// Worker accounts that targeted one product, plus its honest reviewers.
struct ProductTruth {
  std::map<std::string, std::set<std::string>> workers;
  std::set<std::string> honest;

  bool fraud() const { return !workers.empty(); }
  friend bool operator==(const ProductTruth&, const ProductTruth&) = default;
};

struct GroundTruth {
  std::map<std::string, ProductTruth> products;
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// |W ∩ (C_1 ∪ .. ∪ C_c)| / |W|. Honest accounts never count.
inline Rational coverage(const std::set<std::string>& worker_accounts, const Partition& partition) {
  if (worker_accounts.empty()) throw Error("coverage of an empty worker account set");
  std::int64_t hit = 0;
  for (const auto& a : worker_accounts)
    for (const auto& c : partition.components)
      if (std::binary_search(c.accounts.begin(), c.accounts.end(), a)) {
        ++hit;
        break;
      }
  return Rational(hit, static_cast<std::int64_t>(worker_accounts.size()));
}

/// Fraction of the product's workers whose coverage reaches p2.
inline Rational covered_worker_fraction(const ProductTruth& truth, const Partition& partition, double p2) {
  if (truth.workers.empty()) throw Error("p_coverage needs at least one worker");
  const auto threshold = Rational::from_double(p2);
  std::int64_t covered = 0;
  for (const auto& [w, accounts] : truth.workers)
    if (coverage(accounts, partition) >= threshold) ++covered;
  return Rational(covered, static_cast<std::int64_t>(truth.workers.size()));
}

/// True iff at least a p1 fraction of the workers are p2-covered.
inline bool p_coverage(const ProductTruth& truth, const Partition& partition, const CoverageParams& params) {
  params.validate();
  return covered_worker_fraction(truth, partition, params.p2) >= Rational::from_double(params.p1);
}

// ---------------------------------------------------------------------------
// Attribution evaluation

struct RankedWorker {
  std::string worker_id;
  double probability = 0;

  friend bool operator==(const RankedWorker&, const RankedWorker&) = default;
};

/// One attributed instance whose true author is known.
struct InstancePrediction {
  std::string instance_id;
  std::string product_id;
  std::string true_worker;
  std::vector<RankedWorker> ranked;  // best first
  bool abstained = false;

  std::optional<std::string> predicted() const {
    if (abstained || ranked.empty()) return std::nullopt;
    return ranked.front().worker_id;
  }
};

struct ProductPrediction {
  std::string product_id;
  std::set<std::string> workers;
};

struct WorkerScore {
  std::size_t true_count = 0;
  std::size_t predicted_count = 0;
  std::size_t correct = 0;
  double precision() const { return predicted_count == 0 ? 0.0 : double(correct) / double(predicted_count); }
  double recall() const { return true_count == 0 ? 0.0 : double(correct) / double(true_count); }
};

/// Number of apps whose recall (or precision) reaches each threshold.
struct AppLevel {
  std::size_t apps = 0;
  std::size_t at_least_one = 0;  // recall: >= 1 correct worker; precision: unused
  std::size_t ge50 = 0;
  std::size_t ge70 = 0;
  std::size_t ge90 = 0;
};

struct AttributionEval {
  std::size_t instances = 0;
  std::size_t top1 = 0;
  std::size_t top3 = 0;
  std::size_t top5 = 0;
  std::map<std::string, WorkerScore> per_worker;
  AppLevel app_recall;
  AppLevel app_precision;
  std::map<std::string, std::pair<double, double>> per_app;  // product -> (recall, precision)

  double top_k_accuracy(std::size_t k) const {
    if (instances == 0) return 0;
    const auto hits = k <= 1 ? top1 : (k <= 3 ? top3 : top5);
    return double(hits) / double(instances);
  }
};

namespace detail {
inline void bump(AppLevel& lvl, double v) {
  if (v >= 0.5) ++lvl.ge50;
  if (v >= 0.7) ++lvl.ge70;
  if (v >= 0.9) ++lvl.ge90;
}
}  // namespace detail

/// Instance top-k accuracy, per-worker precision/recall (rank-1 prediction,
/// abstentions count as misses) and app-level worker-set recall/precision
/// over fraud products of the ground truth.
inline AttributionEval eval_attribution(std::span<const InstancePrediction> instances,
                                        std::span<const ProductPrediction> products, const GroundTruth& gt) {
  AttributionEval ev;
  for (const auto& inst : instances) {
    ++ev.instances;
    ++ev.per_worker[inst.true_worker].true_count;
    if (auto p = inst.predicted()) {
      ++ev.per_worker[*p].predicted_count;
      if (*p == inst.true_worker) ++ev.per_worker[*p].correct;
    }
    if (inst.abstained) continue;
    for (std::size_t r = 0; r < inst.ranked.size() && r < 5; ++r)
      if (inst.ranked[r].worker_id == inst.true_worker) {
        if (r < 1) ++ev.top1;
        if (r < 3) ++ev.top3;
        ++ev.top5;
        break;
      }
  }
  for (const auto& pred : products) {
    auto it = gt.products.find(pred.product_id);
    if (it == gt.products.end()) throw DataError("no ground truth for product " + pred.product_id);
    const auto& truth = it->second;
    if (!truth.fraud()) continue;
    std::size_t correct = 0;
    for (const auto& w : pred.workers)
      if (truth.workers.contains(w)) ++correct;
    const double recall = double(correct) / double(truth.workers.size());
    ++ev.app_recall.apps;
    if (correct >= 1) ++ev.app_recall.at_least_one;
    detail::bump(ev.app_recall, recall);
    double precision = 0;
    if (!pred.workers.empty()) {
      precision = double(correct) / double(pred.workers.size());
      ++ev.app_precision.apps;
      detail::bump(ev.app_precision, precision);
    }
    ev.per_app[pred.product_id] = {recall, precision};
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Duplicates and re-posts

/// Reviews of one product whose normalized text is identical and which come
/// from at least two accounts. Only the earliest review of each account is
/// kept in a group. Groups are ordered by their first review.
inline std::vector<std::vector<std::string>> find_duplicates(const Corpus& corpus, const std::string& product_id) {
  std::map<std::string, std::map<std::string, const Review*>> by_text;  // text -> account -> earliest
  for (auto i : corpus.reviews_of_product(product_id)) {
    const auto& r = corpus.reviews()[i];
    auto key = normalize_text(r.text);
    if (key.empty()) continue;
    auto& slot = by_text[key][r.account_id];
    if (!slot || std::tie(r.timestamp, r.review_id) < std::tie(slot->timestamp, slot->review_id)) slot = &r;
  }
  std::vector<std::vector<const Review*>> groups;
  for (auto& [text, accounts] : by_text) {
    if (accounts.size() < 2) continue;
    std::vector<const Review*> g;
    for (auto& [a, r] : accounts) g.push_back(r);
    std::sort(g.begin(), g.end(), [](const Review* a, const Review* b) {
      return std::tie(a->timestamp, a->review_id) < std::tie(b->timestamp, b->review_id);
    });
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return std::tie(a.front()->timestamp, a.front()->review_id) < std::tie(b.front()->timestamp, b.front()->review_id);
  });
  std::vector<std::vector<std::string>> out;
  for (const auto& g : groups) {
    std::vector<std::string> ids;
    for (auto* r : g) ids.push_back(r->review_id);
    out.push_back(std::move(ids));
  }
  return out;
}

/// Copies beyond the first review in each duplicate group.
inline std::size_t duplicate_review_count(const std::vector<std::vector<std::string>>& groups) {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size() - 1;
  return n;
}

struct RepostRecord {
  std::string account_id;
  std::string product_id;
  std::size_t repost_count = 0;

  friend bool operator==(const RepostRecord&, const RepostRecord&) = default;
};

/// For every account reviewing the product, counts how often a review text
/// (normalized) that had been seen, then vanished from a snapshot,
/// reappears in a later one. Accounts with no re-posts are listed with 0.
inline std::vector<RepostRecord> find_reposts(const SnapshotSeries& series, const Corpus& corpus) {
  if (series.snapshots.size() < 2) throw DataError("re-post detection needs at least 2 snapshots");
  // (account, text) -> presence per snapshot
  std::map<std::pair<std::string, std::string>, std::vector<bool>> presence;
  for (std::size_t s = 0; s < series.snapshots.size(); ++s)
    for (const auto& id : series.snapshots[s].review_ids) {
      const auto* r = corpus.find_review(id);
      if (!r) throw DataError("snapshot references unknown review " + id);
      auto& row = presence[{r->account_id, normalize_text(r->text)}];
      row.resize(series.snapshots.size(), false);
      row[s] = true;
    }
  std::map<std::string, std::size_t> counts;
  for (const auto& [key, row] : presence) {
    std::size_t n = 0;
    bool seen = false;
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s] && seen && !row[s - 1]) ++n;
      seen = seen || row[s];
    }
    counts[key.first] += n;
  }
  std::vector<RepostRecord> out;
  for (const auto& [account, n] : counts) out.push_back({account, series.product_id, n});
  return out;
}

}  // namespace fraudtrace
