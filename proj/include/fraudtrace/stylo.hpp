#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <ostream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "fraudtrace/corpus.hpp"
#include "fraudtrace/text.hpp"

namespace fraudtrace {

inline constexpr const char* kCandidateWorker = "candidate";

/// All reviews one worker (or one detected component) posted for one product.
struct ReviewInstance {
  std::string instance_id;
  std::string worker_id;  // kCandidateWorker when unknown
  std::string product_id;
  std::vector<std::string> texts;
  std::vector<std::string> account_ids;
};

struct InstanceGrouping {
  std::vector<ReviewInstance> instances;
  std::size_t dropped = 0;  // (worker, product) pairs below min_reviews
};

/// One instance per (worker, product) over attributed accounts; pairs with
/// fewer than `min_reviews` reviews are dropped and counted.
inline InstanceGrouping group_instances(const Corpus& corpus, std::size_t min_reviews = 5) {
  std::map<std::pair<std::string, std::string>, std::vector<const Review*>> groups;
  for (const auto& r : corpus.reviews())
    if (auto w = corpus.worker_of(r.account_id)) groups[{*w, r.product_id}].push_back(&r);
  InstanceGrouping out;
  for (auto& [key, reviews] : groups) {
    if (reviews.size() < min_reviews) {
      ++out.dropped;
      continue;
    }
    std::sort(reviews.begin(), reviews.end(), [](const Review* a, const Review* b) {
      return std::tie(a->timestamp, a->review_id) < std::tie(b->timestamp, b->review_id);
    });
    ReviewInstance inst{key.first + "@" + key.second, key.first, key.second, {}, {}};
    std::set<std::string> accounts;
    for (auto* r : reviews) {
      inst.texts.push_back(r->text);
      accounts.insert(r->account_id);
    }
    inst.account_ids.assign(accounts.begin(), accounts.end());
    out.instances.push_back(std::move(inst));
  }
  return out;
}

/// Top-k vocabulary sizes. POS n-grams are never truncated.
struct StyloConfig {
  std::size_t letter2 = 200;
  std::size_t letter3 = 200;
  std::size_t word2 = 300;
  std::size_t word3 = 300;
  std::size_t min_reviews = 5;
};

/// Raw counts for one instance; the vector form depends on a FeatureSpace.
struct StyleCounts {
  double chars = 0;         // non-whitespace code points
  double ws_tokens = 0;     // whitespace-separated tokens
  double letters[26] = {};  // case-folded
  double uppercase = 0;
  double special = 0;
  double punct[std::size(text::kPunctuation)] = {};
  double digits = 0;
  double numbers = 0;       // number tokens
  double words = 0;         // word tokens
  double misspelled = 0;
  double tags = 0;
  std::unordered_map<std::string, double> letter2, letter3, word2, word3, pos1, pos2, pos3;
  double letter2_total = 0, letter3_total = 0, word2_total = 0, word3_total = 0, pos2_total = 0, pos3_total = 0;
};

namespace detail {

inline void count_review(const std::string& raw, StyleCounts& c) {
  const auto cps = text::code_points(text::nfc(raw));
  bool in_token = false;
  for (auto cp : cps) {
    if (text::is_space(cp)) {
      in_token = false;
      continue;
    }
    if (!in_token) ++c.ws_tokens;
    in_token = true;
    ++c.chars;
    if (text::is_letter(cp)) {
      const auto lower = text::is_upper(cp) ? cp - 'A' + 'a' : cp;
      ++c.letters[lower - 'a'];
      if (text::is_upper(cp)) ++c.uppercase;
    } else if (text::is_digit(cp)) {
      ++c.digits;
    } else if (auto p = text::punctuation_index(cp); p >= 0) {
      ++c.punct[p];
    } else {
      ++c.special;
    }
  }

  const auto tokens = text::tokenize(cps);
  const auto tags = text::pos_tags(tokens);
  const auto& dict = text::Dictionary::english();
  std::vector<const std::string*> run;  // consecutive word tokens
  auto flush = [&] {
    for (std::size_t i = 0; i + 1 < run.size(); ++i) {
      ++c.word2[*run[i] + " " + *run[i + 1]];
      ++c.word2_total;
      if (i + 2 < run.size()) {
        ++c.word3[*run[i] + " " + *run[i + 1] + " " + *run[i + 2]];
        ++c.word3_total;
      }
    }
    run.clear();
  };
  for (const auto& t : tokens) {
    if (t.kind == text::TokenKind::number) ++c.numbers;
    if (t.kind != text::TokenKind::word) {
      flush();
      continue;
    }
    ++c.words;
    if (!dict.known(t.text)) ++c.misspelled;
    run.push_back(&t.text);
    std::string letters;
    for (char ch : t.text)
      if (ch != '\'') letters.push_back(ch);
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
      ++c.letter2[letters.substr(i, 2)];
      ++c.letter2_total;
      if (i + 2 < letters.size()) {
        ++c.letter3[letters.substr(i, 3)];
        ++c.letter3_total;
      }
    }
  }
  flush();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    ++c.tags;
    ++c.pos1[tags[i]];
    if (i + 1 < tags.size()) {
      ++c.pos2[std::string(tags[i]) + "_" + tags[i + 1]];
      ++c.pos2_total;
    }
    if (i + 2 < tags.size()) {
      ++c.pos3[std::string(tags[i]) + "_" + tags[i + 1] + "_" + tags[i + 2]];
      ++c.pos3_total;
    }
  }
}

}  // namespace detail

/// Counts are accumulated review by review; n-grams never span two reviews,
/// so the result does not depend on review order.
inline StyleCounts count_style(const ReviewInstance& inst) {
  StyleCounts c;
  for (const auto& t : inst.texts) detail::count_review(t, c);
  return c;
}

/// Frozen vocabularies defining the feature vector layout.
struct FeatureSpace {
  std::vector<std::string> letter2, letter3, word2, word3, pos1, pos2, pos3;

  std::vector<std::string> feature_names() const {
    std::vector<std::string> names = {"char_count/log1p", "avg_word_len/chars_per_token"};
    for (char ch = 'a'; ch <= 'z'; ++ch) names.push_back(std::string("letter_") + ch + "/char");
    names.push_back("uppercase/char");
    names.push_back("special/char");
    for (const auto& [cp, name] : text::kPunctuation) names.push_back(std::string("punct_") + name + "/char");
    names.push_back("digit/char");
    names.push_back("number/token");
    auto add = [&](const std::vector<std::string>& vocab, const char* prefix, const char* norm) {
      for (const auto& v : vocab) names.push_back(std::string(prefix) + v + norm);
    };
    add(letter2, "letter2_", "/letter2");
    add(letter3, "letter3_", "/letter3");
    add(pos1, "pos_", "/tag");
    add(pos2, "pos2_", "/tag2");
    add(pos3, "pos3_", "/tag3");
    add(word2, "word2_", "/word2");
    add(word3, "word3_", "/word3");
    names.push_back("misspelled/word");
    return names;
  }

  std::size_t dimension() const {
    return 2 + 26 + 2 + std::size(text::kPunctuation) + 2 + letter2.size() + letter3.size() + pos1.size() +
           pos2.size() + pos3.size() + word2.size() + word3.size() + 1;
  }
};

struct FeatureVector {
  std::vector<double> values;
};

namespace detail {

inline std::vector<std::string> top_k(const std::unordered_map<std::string, double>& counts, std::size_t k) {
  std::vector<std::pair<std::string, double>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (items.size() > k) items.resize(k);
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [key, n] : items) out.push_back(std::move(key));
  return out;
}

inline void merge(std::unordered_map<std::string, double>& into, const std::unordered_map<std::string, double>& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

}  // namespace detail

/// Vocabularies from training counts: the k most frequent n-grams of each
/// kind (ties lexicographic); every observed POS n-gram.
inline FeatureSpace build_feature_space(std::span<const StyleCounts> training, const StyloConfig& cfg = {}) {
  if (training.empty()) throw Error("feature space needs at least one training instance");
  std::unordered_map<std::string, double> l2, l3, w2, w3, p1, p2, p3;
  for (const auto& c : training) {
    detail::merge(l2, c.letter2);
    detail::merge(l3, c.letter3);
    detail::merge(w2, c.word2);
    detail::merge(w3, c.word3);
    detail::merge(p1, c.pos1);
    detail::merge(p2, c.pos2);
    detail::merge(p3, c.pos3);
  }
  const auto all = std::numeric_limits<std::size_t>::max();
  return FeatureSpace{detail::top_k(l2, cfg.letter2), detail::top_k(l3, cfg.letter3), detail::top_k(w2, cfg.word2),
                      detail::top_k(w3, cfg.word3),   detail::top_k(p1, all),         detail::top_k(p2, all),
                      detail::top_k(p3, all)};
}

inline FeatureSpace build_feature_space(std::span<const ReviewInstance> instances, const StyloConfig& cfg = {}) {
  std::vector<StyleCounts> counts;
  counts.reserve(instances.size());
  for (const auto& i : instances) counts.push_back(count_style(i));
  return build_feature_space(std::span<const StyleCounts>(counts), cfg);
}

/// Feature vector in the layout of `FeatureSpace::feature_names()`.
inline FeatureVector vectorize(const StyleCounts& c, const FeatureSpace& space) {
  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
  FeatureVector fv;
  auto& v = fv.values;
  v.reserve(space.dimension());
  v.push_back(std::log1p(c.chars));
  v.push_back(ratio(c.chars, c.ws_tokens));
  for (double l : c.letters) v.push_back(ratio(l, c.chars));
  v.push_back(ratio(c.uppercase, c.chars));
  v.push_back(ratio(c.special, c.chars));
  for (double p : c.punct) v.push_back(ratio(p, c.chars));
  v.push_back(ratio(c.digits, c.chars));
  v.push_back(ratio(c.numbers, c.ws_tokens));
  auto add = [&](const std::vector<std::string>& vocab, const std::unordered_map<std::string, double>& counts,
                 double total) {
    for (const auto& key : vocab) {
      auto it = counts.find(key);
      v.push_back(it == counts.end() ? 0.0 : ratio(it->second, total));
    }
  };
  add(space.letter2, c.letter2, c.letter2_total);
  add(space.letter3, c.letter3, c.letter3_total);
  add(space.pos1, c.pos1, c.tags);
  add(space.pos2, c.pos2, c.pos2_total);
  add(space.pos3, c.pos3, c.pos3_total);
  add(space.word2, c.word2, c.word2_total);
  add(space.word3, c.word3, c.word3_total);
  v.push_back(ratio(c.misspelled, c.words));
  return fv;
}

inline FeatureVector extract_features(const ReviewInstance& inst, const FeatureSpace& space) {
  return vectorize(count_style(inst), space);
}

/// CSV with a header of feature names; first column is the instance id.
inline void write_feature_csv(std::ostream& out, const FeatureSpace& space, std::span<const ReviewInstance> instances,
                              std::span<const FeatureVector> vectors) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q.push_back('"');
      q.push_back(ch);
    }
    return q + "\"";
  };
  out << "instance_id,worker_id,product_id";
  for (const auto& n : space.feature_names()) out << ',' << quote(n);
  out << '\n';
  for (std::size_t i = 0; i < instances.size(); ++i) {
    out << quote(instances[i].instance_id) << ',' << quote(instances[i].worker_id) << ','
        << quote(instances[i].product_id);
    for (double x : vectors[i].values) out << ',' << x;
    out << '\n';
  }
}

}  // namespace fraudtrace
