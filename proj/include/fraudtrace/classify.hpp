#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudtrace/common.hpp"
#include "fraudtrace/metrics.hpp"

namespace fraudtrace {

using Matrix = std::vector<std::vector<double>>;

/// Per-feature z-scoring learned from training rows. Features that are
/// constant in training get weight 0.
class Standardizer {
 public:
  Standardizer() = default;

  explicit Standardizer(const Matrix& rows) {
    if (rows.empty()) return;
    const auto d = rows.front().size();
    mean_.assign(d, 0.0);
    inv_std_.assign(d, 0.0);
    for (const auto& r : rows)
      for (std::size_t j = 0; j < d; ++j) mean_[j] += r[j];
    for (auto& m : mean_) m /= double(rows.size());
    for (const auto& r : rows)
      for (std::size_t j = 0; j < d; ++j) inv_std_[j] += (r[j] - mean_[j]) * (r[j] - mean_[j]);
    for (auto& s : inv_std_) {
      s = std::sqrt(s / double(rows.size()));
      s = s > 1e-12 ? 1.0 / s : 0.0;
    }
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean_.size()) throw Error("feature dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean_[j]) * inv_std_[j];
    return out;
  }

  nlohmann::json to_json() const { return {{"mean", mean_}, {"inv_std", inv_std_}}; }
  static Standardizer from_json(const nlohmann::json& j) {
    Standardizer s;
    s.mean_ = j.at("mean").get<std::vector<double>>();
    s.inv_std_ = j.at("inv_std").get<std::vector<double>>();
    return s;
  }

 private:
  std::vector<double> mean_;
  std::vector<double> inv_std_;
};

/// Class distribution as a ranked list, best first; equal probabilities are
/// ordered by class name.
inline std::vector<RankedWorker> rank_classes(const std::vector<std::string>& classes, std::span<const double> probs) {
  std::vector<RankedWorker> out;
  out.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) out.push_back({classes[i], probs[i]});
  std::sort(out.begin(), out.end(), [](const RankedWorker& a, const RankedWorker& b) {
    return a.probability != b.probability ? a.probability > b.probability : a.worker_id < b.worker_id;
  });
  return out;
}

/// Supervised model over dense feature rows with string labels.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Matrix& x, const std::vector<std::string>& y) = 0;
  /// Probabilities aligned with `classes()`; they sum to 1.
  virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;
  virtual nlohmann::json to_json() const = 0;
  virtual std::string name() const = 0;

  const std::vector<std::string>& classes() const noexcept { return classes_; }

  std::vector<RankedWorker> rank(std::span<const double> x) const {
    const auto p = predict_proba(x);
    return rank_classes(classes_, p);
  }

 protected:
  void set_classes(const std::vector<std::string>& y) {
    std::set<std::string> s(y.begin(), y.end());
    classes_.assign(s.begin(), s.end());
    if (classes_.size() < 2) throw Error("training needs at least 2 classes, got " + std::to_string(classes_.size()));
  }
  std::size_t class_index(const std::string& label) const {
    return static_cast<std::size_t>(std::lower_bound(classes_.begin(), classes_.end(), label) - classes_.begin());
  }

  std::vector<std::string> classes_;
};

/// k nearest neighbours, Euclidean distance on z-scored features, votes
/// weighted by inverse distance. Neighbours at distance zero outvote all
/// others and share the vote equally.
class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(std::size_t k = 5) : k_(k) {
    if (k_ == 0) throw ConfigError("k-NN k must be >= 1");
  }

  void fit(const Matrix& x, const std::vector<std::string>& y) override {
    if (x.size() != y.size() || x.empty()) throw Error("k-NN fit: empty or mismatched training data");
    set_classes(y);
    scaler_ = Standardizer(x);
    rows_.clear();
    labels_.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
      rows_.push_back(scaler_.apply(x[i]));
      labels_.push_back(class_index(y[i]));
    }
  }

  std::vector<double> predict_proba(std::span<const double> raw) const override {
    const auto x = scaler_.apply(raw);
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - rows_[i][j];
        s += d * d;
      }
      dist.emplace_back(std::sqrt(s), i);
    }
    const auto k = std::min(k_, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<double> votes(classes_.size(), 0.0);
    if (dist.front().first <= 1e-12) {
      for (std::size_t i = 0; i < k && dist[i].first <= 1e-12; ++i) votes[labels_[dist[i].second]] += 1.0;
    } else {
      for (std::size_t i = 0; i < k; ++i) votes[labels_[dist[i].second]] += 1.0 / dist[i].first;
    }
    const double total = std::accumulate(votes.begin(), votes.end(), 0.0);
    for (auto& v : votes) v /= total;
    return votes;
  }

  nlohmann::json to_json() const override {
    std::vector<std::string> labels;
    for (auto l : labels_) labels.push_back(classes_[l]);
    return {{"algorithm", name()}, {"k", k_}, {"scaler", scaler_.to_json()}, {"rows", rows_}, {"labels", labels}};
  }

  static std::unique_ptr<KnnClassifier> from_json(const nlohmann::json& j) {
    auto m = std::make_unique<KnnClassifier>(j.at("k").get<std::size_t>());
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    m->set_classes(labels);
    m->scaler_ = Standardizer::from_json(j.at("scaler"));
    m->rows_ = j.at("rows").get<Matrix>();
    for (const auto& l : labels) m->labels_.push_back(m->class_index(l));
    return m;
  }

  std::string name() const override { return "knn"; }

 private:
  std::size_t k_;
  Standardizer scaler_;
  Matrix rows_;  // standardized
  std::vector<std::size_t> labels_;
};

/// Multinomial logistic regression on z-scored features, trained by
/// full-batch gradient descent with L2 penalty. Deterministic.
class LogisticClassifier final : public Classifier {
 public:
  struct Params {
    std::size_t iterations = 300;
    double learning_rate = 0.5;
    double l2 = 1e-3;
  };

  LogisticClassifier() = default;
  explicit LogisticClassifier(Params p) : params_(p) {}

  void fit(const Matrix& x, const std::vector<std::string>& y) override {
    if (x.size() != y.size() || x.empty()) throw Error("logistic fit: empty or mismatched training data");
    set_classes(y);
    scaler_ = Standardizer(x);
    Matrix z;
    for (const auto& r : x) z.push_back(scaler_.apply(r));
    const std::size_t n = z.size(), d = z.front().size(), c = classes_.size();
    std::vector<std::size_t> yi;
    for (const auto& l : y) yi.push_back(class_index(l));
    weights_.assign(c, std::vector<double>(d + 1, 0.0));
    Matrix grad(c, std::vector<double>(d + 1));
    std::vector<double> p(c);
    for (std::size_t it = 0; it < params_.iterations; ++it) {
      for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        softmax(z[i], p);
        for (std::size_t k = 0; k < c; ++k) {
          const double e = p[k] - (yi[i] == k ? 1.0 : 0.0);
          for (std::size_t j = 0; j < d; ++j) grad[k][j] += e * z[i][j];
          grad[k][d] += e;
        }
      }
      for (std::size_t k = 0; k < c; ++k)
        for (std::size_t j = 0; j <= d; ++j) {
          const double reg = j < d ? params_.l2 * weights_[k][j] : 0.0;
          weights_[k][j] -= params_.learning_rate * (grad[k][j] / double(n) + reg);
        }
    }
  }

  std::vector<double> predict_proba(std::span<const double> raw) const override {
    std::vector<double> p(classes_.size());
    softmax(scaler_.apply(raw), p);
    return p;
  }

  nlohmann::json to_json() const override {
    return {{"algorithm", name()}, {"classes", classes_}, {"scaler", scaler_.to_json()}, {"weights", weights_}};
  }

  static std::unique_ptr<LogisticClassifier> from_json(const nlohmann::json& j) {
    auto m = std::make_unique<LogisticClassifier>();
    m->set_classes(j.at("classes").get<std::vector<std::string>>());
    m->scaler_ = Standardizer::from_json(j.at("scaler"));
    m->weights_ = j.at("weights").get<Matrix>();
    return m;
  }

  std::string name() const override { return "logistic"; }

 private:
  void softmax(const std::vector<double>& z, std::vector<double>& p) const {
    const std::size_t d = z.size();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      double s = weights_[k][d];
      for (std::size_t j = 0; j < d; ++j) s += weights_[k][j] * z[j];
      p[k] = s;
      mx = std::max(mx, s);
    }
    double total = 0;
    for (auto& v : p) total += (v = std::exp(v - mx));
    for (auto& v : p) v /= total;
  }

  Params params_;
  Standardizer scaler_;
  Matrix weights_;
};

inline std::unique_ptr<Classifier> make_classifier(std::string_view algo, std::size_t k = 5) {
  if (algo == "knn") return std::make_unique<KnnClassifier>(k);
  if (algo == "logistic") return std::make_unique<LogisticClassifier>();
  throw ConfigError("unknown classifier '" + std::string(algo) + "' (expected knn or logistic)");
}

inline std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j) {
  const auto algo = j.at("algorithm").get<std::string>();
  if (algo == "knn") return KnnClassifier::from_json(j);
  if (algo == "logistic") return LogisticClassifier::from_json(j);
  throw DataError("unknown classifier in model file: " + algo);
}

}  // namespace fraudtrace
