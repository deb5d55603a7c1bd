#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudtrace/common.hpp"

namespace fraudtrace {

/// One user's text activity on one product.
struct Review {
  std::string review_id;
  std::string account_id;
  std::string product_id;
  std::string text;
  int rating = 0;
  std::int64_t timestamp = 0;  // UTC seconds
  std::optional<std::string> snapshot_id;
  nlohmann::json extra = nlohmann::json::object();  // unknown fields, kept for round-trip

  friend bool operator==(const Review&, const Review&) = default;
};

/// Non-fatal findings collected while loading.
struct Diagnostics {
  std::vector<std::string> warnings;
  std::size_t skipped = 0;
};

/// Reviews with account/product indices and the partial account -> worker
/// labels. Built once, then only read.
class Corpus {
 public:
  void add_review(Review r) {
    if (r.rating < 1 || r.rating > 5)
      throw DataError("review " + r.review_id + ": rating " + std::to_string(r.rating) + " outside [1,5]");
    if (r.review_id.empty()) throw DataError("empty review_id");
    if (!review_index_.emplace(r.review_id, reviews_.size()).second)
      throw DataError("duplicate review_id " + r.review_id);
    const auto idx = reviews_.size();
    by_account_[r.account_id].push_back(idx);
    by_product_[r.product_id].push_back(idx);
    account_products_[r.account_id].insert(r.product_id);
    accounts_.insert(r.account_id);
    products_.insert(r.product_id);
    reviews_.push_back(std::move(r));
  }

  /// Records account -> worker. Unknown accounts and conflicting labels throw.
  void set_attribution(const std::string& account_id, const std::string& worker_id) {
    if (!accounts_.contains(account_id)) throw DataError("attribution for unknown account " + account_id);
    auto [it, inserted] = attributions_.emplace(account_id, worker_id);
    if (!inserted && it->second != worker_id)
      throw DataError("conflicting labels for account " + account_id + ": " + it->second + " vs " + worker_id);
  }

  const std::vector<Review>& reviews() const noexcept { return reviews_; }
  const std::set<std::string>& accounts() const noexcept { return accounts_; }
  const std::set<std::string>& products() const noexcept { return products_; }
  const std::map<std::string, std::string>& attributions() const noexcept { return attributions_; }

  bool has_product(const std::string& p) const { return products_.contains(p); }
  bool has_account(const std::string& a) const { return accounts_.contains(a); }

  const Review* find_review(const std::string& review_id) const {
    auto it = review_index_.find(review_id);
    return it == review_index_.end() ? nullptr : &reviews_[it->second];
  }

  std::span<const std::size_t> reviews_of_account(const std::string& a) const { return lookup(by_account_, a); }
  std::span<const std::size_t> reviews_of_product(const std::string& p) const { return lookup(by_product_, p); }

  const std::set<std::string>& products_of_account(const std::string& a) const {
    static const std::set<std::string> none;
    auto it = account_products_.find(a);
    return it == account_products_.end() ? none : it->second;
  }

  /// Distinct reviewers of a product, sorted.
  std::vector<std::string> reviewers_of(const std::string& p) const {
    std::set<std::string> s;
    for (auto i : reviews_of_product(p)) s.insert(reviews_[i].account_id);
    return {s.begin(), s.end()};
  }

  std::optional<std::string> worker_of(const std::string& account) const {
    auto it = attributions_.find(account);
    if (it == attributions_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.reviews_ == b.reviews_ && a.attributions_ == b.attributions_;
  }

 private:
  static std::span<const std::size_t> lookup(const std::map<std::string, std::vector<std::size_t>>& m,
                                             const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) return {};
    return it->second;
  }

  std::vector<Review> reviews_;
  std::map<std::string, std::size_t> review_index_;
  std::map<std::string, std::vector<std::size_t>> by_account_;
  std::map<std::string, std::vector<std::size_t>> by_product_;
  std::map<std::string, std::set<std::string>> account_products_;
  std::set<std::string> accounts_;
  std::set<std::string> products_;
  std::map<std::string, std::string> attributions_;
};

namespace detail {

inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

/// Accepts integer seconds, "YYYY-MM-DD" (midnight UTC) or
/// "YYYY-MM-DDTHH:MM:SS[Z]".
inline std::optional<std::int64_t> parse_timestamp(const nlohmann::json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d != std::floor(d)) return std::nullopt;
    return static_cast<std::int64_t>(d);
  }
  if (!v.is_string()) return std::nullopt;
  const auto s = v.get<std::string>();
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  char tail = 0;
  if (s.size() == 10 && std::sscanf(s.c_str(), "%4d-%2d-%2d", &y, &mo, &d) == 3) {
  } else if (s.size() >= 19 && std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &sec, &tail) >= 6) {
    if (s.size() > 20 || (s.size() == 20 && tail != 'Z')) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 + h * 3600 + mi * 60 + sec;
}

inline std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) throw ParseError(line, std::string("field '") + key + "' must be a string");
  auto s = it->get<std::string>();
  if (s.empty()) throw ParseError(line, std::string("field '") + key + "' is empty");
  return s;
}

inline nlohmann::json parse_line(const std::string& text, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line, "record is not a JSON object");
  return obj;
}

inline bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

}  // namespace detail

/// Parses one reviews.jsonl record.
inline Review parse_review(const std::string& text, std::size_t line, Diagnostics* diag = nullptr) {
  static const std::set<std::string> known = {"review_id", "account_id", "product_id", "text",
                                              "rating",    "timestamp",  "snapshot_id"};
  const auto obj = detail::parse_line(text, line);
  Review r;
  r.review_id = detail::required_string(obj, "review_id", line);
  r.account_id = detail::required_string(obj, "account_id", line);
  r.product_id = detail::required_string(obj, "product_id", line);
  if (auto it = obj.find("text"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line, "field 'text' must be a string");
    r.text = it->get<std::string>();
  }
  auto rating = obj.find("rating");
  if (rating == obj.end() || !rating->is_number_integer()) throw ParseError(line, "field 'rating' must be an integer");
  r.rating = rating->get<int>();
  if (r.rating < 1 || r.rating > 5) throw ParseError(line, "rating " + std::to_string(r.rating) + " outside [1,5]");
  auto ts = obj.find("timestamp");
  if (ts == obj.end()) throw ParseError(line, "missing field 'timestamp'");
  auto parsed = detail::parse_timestamp(*ts);
  if (!parsed) throw ParseError(line, "unparseable timestamp " + ts->dump());
  r.timestamp = *parsed;
  if (auto it = obj.find("snapshot_id"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line, "field 'snapshot_id' must be a string");
    r.snapshot_id = it->get<std::string>();
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (known.contains(it.key())) continue;
    r.extra[it.key()] = it.value();
    if (diag) diag->warnings.push_back("line " + std::to_string(line) + ": unknown field '" + it.key() + "' preserved");
  }
  return r;
}

inline nlohmann::json to_json(const Review& r) {
  nlohmann::json j = r.extra;
  j["review_id"] = r.review_id;
  j["account_id"] = r.account_id;
  j["product_id"] = r.product_id;
  j["text"] = r.text;
  j["rating"] = r.rating;
  j["timestamp"] = r.timestamp;
  j["snapshot_id"] = r.snapshot_id ? nlohmann::json(*r.snapshot_id) : nlohmann::json(nullptr);
  return j;
}

inline Corpus read_corpus(std::istream& in, Diagnostics* diag = nullptr) {
  Corpus corpus;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (detail::blank(text)) continue;
    auto review = parse_review(text, line, diag);
    if (corpus.find_review(review.review_id))
      throw ParseError(line, "duplicate review_id " + review.review_id);
    corpus.add_review(std::move(review));
  }
  return corpus;
}

/// Loads reviews.jsonl (one review per line).
inline Corpus load_corpus(const std::string& path, Diagnostics* diag = nullptr) {
  auto in = detail::open_input(path);
  return read_corpus(in, diag);
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& r : corpus.reviews()) out << to_json(r).dump() << '\n';
}

inline void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  write_corpus(out, corpus);
}

/// Applies attributions.jsonl records to a copy of `corpus`. Labels for
/// accounts absent from the corpus are skipped and counted in `diag`.
inline Corpus read_attributions(std::istream& in, Corpus corpus, Diagnostics* diag = nullptr) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (detail::blank(text)) continue;
    const auto obj = detail::parse_line(text, line);
    const auto account = detail::required_string(obj, "account_id", line);
    const auto worker = detail::required_string(obj, "worker_id", line);
    if (!corpus.has_account(account)) {
      if (diag) {
        ++diag->skipped;
        diag->warnings.push_back("line " + std::to_string(line) + ": unknown account " + account + " skipped");
      }
      continue;
    }
    if (auto existing = corpus.worker_of(account); existing && *existing != worker)
      throw ParseError(line, "conflicting labels for account " + account + ": " + *existing + " vs " + worker);
    corpus.set_attribution(account, worker);
  }
  return corpus;
}

inline Corpus load_attributions(const std::string& path, Corpus corpus, Diagnostics* diag = nullptr) {
  auto in = detail::open_input(path);
  return read_attributions(in, std::move(corpus), diag);
}

inline void write_attributions(std::ostream& out, const std::map<std::string, std::string>& labels) {
  for (const auto& [account, worker] : labels)
    out << nlohmann::json{{"account_id", account}, {"worker_id", worker}}.dump() << '\n';
}

struct Snapshot {
  std::string snapshot_id;
  std::int64_t timestamp = 0;
  std::set<std::string> review_ids;
};

/// Per-product view of the crawl rounds, oldest first.
struct SnapshotSeries {
  std::string product_id;
  std::vector<Snapshot> snapshots;
};

/// Crawl rounds are corpus-wide: a round that saw nothing for this product
/// still appears, with an empty set. A round's time is the latest review
/// timestamp recorded in it anywhere in the corpus.
inline SnapshotSeries snapshot_series(const Corpus& corpus, const std::string& product_id) {
  if (!corpus.has_product(product_id)) throw DataError("unknown product " + product_id);
  for (auto i : corpus.reviews_of_product(product_id)) {
    const auto& r = corpus.reviews()[i];
    if (!r.snapshot_id)
      throw DataError("review " + r.review_id + " of product " + product_id +
                      " has no snapshot_id; re-post analysis needs crawl rounds (use single-snapshot mode)");
  }
  std::map<std::string, std::int64_t> round_time;
  for (const auto& r : corpus.reviews()) {
    if (!r.snapshot_id) continue;
    auto [it, inserted] = round_time.emplace(*r.snapshot_id, r.timestamp);
    if (!inserted) it->second = std::max(it->second, r.timestamp);
  }
  SnapshotSeries series{product_id, {}};
  for (const auto& [id, ts] : round_time) series.snapshots.push_back({id, ts, {}});
  std::sort(series.snapshots.begin(), series.snapshots.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.timestamp < b.timestamp; });
  for (std::size_t i = 1; i < series.snapshots.size(); ++i) {
    if (series.snapshots[i].timestamp == series.snapshots[i - 1].timestamp)
      throw DataError("snapshots " + series.snapshots[i - 1].snapshot_id + " and " + series.snapshots[i].snapshot_id +
                      " share timestamp " + std::to_string(series.snapshots[i].timestamp) + "; order is ambiguous");
  }
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < series.snapshots.size(); ++i) pos[series.snapshots[i].snapshot_id] = i;
  for (auto i : corpus.reviews_of_product(product_id)) {
    const auto& r = corpus.reviews()[i];
    series.snapshots[pos.at(*r.snapshot_id)].review_ids.insert(r.review_id);
  }
  return series;
}

}  // namespace fraudtrace
