#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudtrace/common.hpp"
#include "fraudtrace/config.hpp"
#include "fraudtrace/corpus.hpp"
#include "fraudtrace/metrics.hpp"

namespace fraudtrace {

// ---------------------------------------------------------------------------
// Text styles

enum class Capitalization { sentence, lower, title, upper };

/// Parameters of one writer's review generator.
struct StyleProfile {
  std::vector<std::string> vocabulary;  // preferred content words, most frequent first
  double zipf = 1.0;
  double own_mix = 0.85;                // chance a content word comes from `vocabulary`
  std::vector<std::string> function_words;
  double function_rate = 0.35;
  std::vector<std::string> phrases;     // signature phrases
  double phrase_rate = 0.2;             // per sentence
  double typo_rate = 0.02;              // per content word
  Range words_per_sentence{4, 9};
  Range sentences{1, 3};
  std::vector<std::string> endings{".", "!"};
  double comma_rate = 0.1;
  Capitalization caps = Capitalization::sentence;
  double digit_rate = 0.05;             // per review
  std::string emoticon;
  double emoticon_rate = 0;             // per review
};

namespace detail {

inline const std::vector<std::string>& content_words() {
  static const std::vector<std::string> words = {
      "app", "game", "feature", "update", "design", "level", "graphics", "player", "battery", "screen",
      "interface", "version", "music", "sound", "story", "quality", "price", "value", "support", "team",
      "developer", "download", "install", "account", "phone", "tablet", "device", "speed", "performance", "layout",
      "menu", "button", "option", "setting", "control", "character", "mission", "reward", "coin", "bonus",
      "friend", "family", "kid", "time", "day", "week", "experience", "fun", "challenge", "puzzle",
      "map", "photo", "camera", "video", "filter", "editor", "tool", "widget", "theme", "color",
      "font", "keyboard", "message", "chat", "call", "contact", "calendar", "note", "reminder", "alarm",
      "weather", "news", "shop", "deal", "discount", "ticket", "payment", "wallet", "bank", "workout",
      "diet", "sleep", "health", "recipe", "travel", "hotel", "flight", "route", "radio", "podcast",
      "song", "playlist", "stream", "movie", "show", "book", "lesson", "language", "word", "quiz",
      "good", "great", "awesome", "amazing", "excellent", "perfect", "nice", "cool", "best", "super",
      "fantastic", "wonderful", "brilliant", "solid", "smooth", "fast", "easy", "simple", "clean", "beautiful",
      "useful", "helpful", "reliable", "stable", "addictive", "relaxing", "entertaining", "creative", "clever", "intuitive",
      "bad", "slow", "buggy", "annoying", "boring", "confusing", "expensive", "cheap", "free", "new",
      "old", "small", "big", "quick", "fresh", "modern", "classic", "friendly", "powerful", "handy",
      "love", "like", "enjoy", "recommend", "use", "play", "try", "need", "want", "get",
      "keep", "find", "make", "work", "run", "crash", "load", "open", "save", "share",
      "download", "learn", "watch", "listen", "read", "check", "help", "improve", "fix", "add",
      "really", "totally", "definitely", "absolutely", "highly", "truly", "always", "never", "often", "sometimes",
      "pretty", "quite", "just", "still", "finally", "already", "again", "also", "even", "ever",
      "lovely", "superb", "neat", "sweet", "gorgeous", "slick", "snappy", "polished", "fluid", "crisp",
      "gem", "masterpiece", "lifesaver", "winner", "keeper", "bargain", "treasure", "blast", "hit", "favorite",
      "thanks", "wow", "yay", "omg", "cheers", "kudos", "bravo", "hooray", "whoa", "yes"};
  return words;
}

inline const std::vector<std::string>& all_function_words() {
  static const std::vector<std::string> words = {"the", "a", "is", "and", "it", "this", "very", "so", "to",
                                                 "for", "with", "my", "i", "of", "in", "on", "was", "are",
                                                 "but", "you", "all", "too", "an", "its"};
  return words;
}

inline constexpr std::array<const char*, 8> kEndings = {".", "!", "!!", "!!!", "...", "", "?!", "."};
inline constexpr std::array<const char*, 8> kEmoticons = {":)", ":D", "<3", ";)", "xD", "^_^", ":-)", "*_*"};

template <class T>
std::vector<T> sample_distinct(const std::vector<T>& from, std::size_t k, Rng& rng) {
  std::vector<T> pool = from;
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  pool.resize(k);
  return pool;
}

inline std::size_t zipf_pick(std::size_t n, double s, Rng& rng) {
  double total = 0;
  for (std::size_t i = 1; i <= n; ++i) total += 1.0 / std::pow(double(i), s);
  double r = rng.uniform() * total;
  for (std::size_t i = 1; i <= n; ++i) {
    r -= 1.0 / std::pow(double(i), s);
    if (r < 0) return i - 1;
  }
  return n - 1;
}

inline std::string typo(const std::string& w, Rng& rng) {
  if (w.size() < 3) return w;
  std::string out = w;
  const auto i = rng.below(w.size() - 1);
  switch (rng.below(3)) {
    case 0: std::swap(out[i], out[i + 1]); break;
    case 1: out.erase(i, 1); break;
    default: out.insert(i, 1, out[i]); break;
  }
  return out;
}

}  // namespace detail

/// A fraud worker's style: a distinct slice of the shared vocabulary plus
/// individual habits.
inline StyleProfile random_worker_style(Rng& rng) {
  StyleProfile s;
  s.vocabulary = detail::sample_distinct(detail::content_words(), 70, rng);
  s.zipf = 0.8 + 0.6 * rng.uniform();
  s.own_mix = 0.8 + 0.15 * rng.uniform();
  s.function_words = detail::sample_distinct(detail::all_function_words(), 6, rng);
  s.function_rate = 0.1 + 0.5 * rng.uniform();
  for (int i = 0; i < 3; ++i) {
    std::string p = s.vocabulary[rng.below(20)];
    const auto extra = 1 + rng.below(2);
    for (std::size_t j = 0; j < extra; ++j) p += " " + s.vocabulary[rng.below(s.vocabulary.size())];
    s.phrases.push_back(p);
  }
  s.phrase_rate = 0.15 + 0.3 * rng.uniform();
  s.typo_rate = 0.12 * rng.uniform();
  const auto wlo = rng.between(2, 8);
  s.words_per_sentence = {wlo, wlo + rng.between(2, 8)};
  s.sentences = {1, rng.between(1, 4)};
  s.endings = {detail::kEndings[rng.below(detail::kEndings.size())], detail::kEndings[rng.below(detail::kEndings.size())]};
  s.comma_rate = 0.3 * rng.uniform();
  s.caps = static_cast<Capitalization>(rng.below(4));
  s.digit_rate = 0.4 * rng.uniform();
  s.emoticon = detail::kEmoticons[rng.below(detail::kEmoticons.size())];
  s.emoticon_rate = 0.5 * rng.uniform();
  return s;
}

/// The shared style of ordinary reviewers: the whole vocabulary, plain habits.
inline StyleProfile background_style(std::uint64_t seed) {
  Rng rng(seed ^ 0x6261636b67726f75ULL);
  StyleProfile s;
  s.vocabulary = detail::sample_distinct(detail::content_words(), detail::content_words().size(), rng);
  s.zipf = 0.6;
  s.own_mix = 1.0;
  s.function_words = detail::all_function_words();
  s.function_rate = 0.4;
  s.phrase_rate = 0;
  s.typo_rate = 0.02;
  s.words_per_sentence = {3, 12};
  s.sentences = {1, 3};
  s.endings = {".", "!"};
  s.comma_rate = 0.08;
  s.caps = Capitalization::sentence;
  s.digit_rate = 0.05;
  return s;
}

/// One review in the given style.
inline std::string generate_text(const StyleProfile& s, Rng& rng) {
  const auto& shared = detail::content_words();
  std::string out;
  const auto n_sent = rng.between(s.sentences.lo, s.sentences.hi);
  for (std::int64_t si = 0; si < n_sent; ++si) {
    std::vector<std::string> words;
    if (!s.phrases.empty() && rng.bernoulli(s.phrase_rate)) {
      std::string p = s.phrases[rng.below(s.phrases.size())];
      for (std::size_t b = 0, e; b <= p.size(); b = e + 1) {
        e = p.find(' ', b);
        if (e == std::string::npos) e = p.size();
        words.push_back(p.substr(b, e - b));
      }
    }
    const auto n_words = rng.between(s.words_per_sentence.lo, s.words_per_sentence.hi);
    for (std::int64_t wi = 0; wi < n_words; ++wi) {
      if (!s.function_words.empty() && rng.bernoulli(s.function_rate))
        words.push_back(s.function_words[rng.below(s.function_words.size())]);
      std::string w = (!s.vocabulary.empty() && rng.bernoulli(s.own_mix))
                          ? s.vocabulary[detail::zipf_pick(s.vocabulary.size(), s.zipf, rng)]
                          : shared[rng.below(shared.size())];
      if (rng.bernoulli(s.typo_rate)) w = detail::typo(w, rng);
      words.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto& w = words[i];
      switch (s.caps) {
        case Capitalization::sentence:
          if (i == 0 || w == "i") w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
          break;
        case Capitalization::title: w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0]))); break;
        case Capitalization::upper:
          for (auto& ch : w) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
          break;
        case Capitalization::lower: break;
      }
      if (!out.empty() && (i > 0 || si > 0)) out += ' ';
      out += w;
      if (i + 1 < words.size() && rng.bernoulli(s.comma_rate)) out += ',';
    }
    out += s.endings[rng.below(s.endings.size())];
  }
  if (rng.bernoulli(s.digit_rate)) out += rng.bernoulli(0.5) ? " " + std::to_string(rng.between(1, 10)) + "/10" : " 5 stars";
  if (!s.emoticon.empty() && rng.bernoulli(s.emoticon_rate)) out += " " + s.emoticon;
  return out;
}

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioConfig {
  std::size_t n_workers = 5;
  Range accounts_per_worker{30, 30};
  std::size_t n_products = 40;
  double fraud_product_fraction = 0.75;
  Range workers_per_fraud_product{1, 3};
  double collaboration_rate = 0.05;  // chance each other worker joins a fraud product
  Range honest_reviewers_per_product{20, 60};
  Range reviews_per_worker_per_product{5, 15};
  double majority_fraction = 0.5;  // fraud products where fraud reviews should outnumber honest ones
  std::size_t cover_products_per_worker = 4;
  std::size_t background_products = 2000;
  Range honest_background_reviews{0, 3};
  double honest_cross_rate = 0.05;  // chance an honest reviewer also reviews a second main product
  std::vector<StyleProfile> style_profiles;  // generated when empty
  std::uint64_t seed = 1;

  void validate() const {
    if (n_products == 0) throw ConfigError("synth.products must be >= 1");
    if (collaboration_rate < 0 || collaboration_rate > 1) throw ConfigError("synth.collaboration_rate must be in [0,1]");
    if (fraud_product_fraction < 0 || fraud_product_fraction > 1) throw ConfigError("synth.fraud_product_fraction must be in [0,1]");
    if (majority_fraction < 0 || majority_fraction > 1) throw ConfigError("synth.majority_fraction must be in [0,1]");
    if (honest_cross_rate < 0 || honest_cross_rate > 1) throw ConfigError("synth.honest_cross_rate must be in [0,1]");
    if (honest_reviewers_per_product.lo < 0 || honest_background_reviews.lo < 0)
      throw ConfigError("synth honest ranges must be non-negative");
    if (honest_background_reviews.hi > 0 && background_products == 0)
      throw ConfigError("synth.honest_background_reviews needs synth.background_products > 0");
    if (!style_profiles.empty() && style_profiles.size() != n_workers)
      throw ConfigError("synth style profiles must match the worker count");
    if (n_workers == 0) return;
    if (accounts_per_worker.lo < 1) throw ConfigError("synth.accounts_per_worker must be >= 1");
    if (reviews_per_worker_per_product.lo < 1) throw ConfigError("synth.reviews_per_worker_per_product must be >= 1");
    if (reviews_per_worker_per_product.hi > accounts_per_worker.lo)
      throw ConfigError("synth.reviews_per_worker_per_product (" + reviews_per_worker_per_product.str() +
                        ") exceeds the smallest account pool (" + std::to_string(accounts_per_worker.lo) + ")");
    if (workers_per_fraud_product.lo < 1 || workers_per_fraud_product.lo > static_cast<std::int64_t>(n_workers))
      throw ConfigError("synth.workers_per_fraud_product must start between 1 and synth.workers");
    if (cover_products_per_worker < 1)
      throw ConfigError("synth.cover_products_per_worker must be >= 1 so every worker account reviews two products");
  }

  static ScenarioConfig from_settings(const Settings& s) {
    ScenarioConfig c;
    c.n_workers = s.get_size("synth.workers", c.n_workers);
    c.accounts_per_worker = s.get_range("synth.accounts_per_worker", c.accounts_per_worker);
    c.n_products = s.get_size("synth.products", c.n_products);
    c.fraud_product_fraction = s.get_double("synth.fraud_product_fraction", c.fraud_product_fraction);
    c.workers_per_fraud_product = s.get_range("synth.workers_per_fraud_product", c.workers_per_fraud_product);
    c.collaboration_rate = s.get_double("synth.collaboration_rate", c.collaboration_rate);
    c.honest_reviewers_per_product = s.get_range("synth.honest_reviewers_per_product", c.honest_reviewers_per_product);
    c.reviews_per_worker_per_product =
        s.get_range("synth.reviews_per_worker_per_product", c.reviews_per_worker_per_product);
    c.majority_fraction = s.get_double("synth.majority_fraction", c.majority_fraction);
    c.cover_products_per_worker = s.get_size("synth.cover_products_per_worker", c.cover_products_per_worker);
    c.background_products = s.get_size("synth.background_products", c.background_products);
    c.honest_background_reviews = s.get_range("synth.honest_background_reviews", c.honest_background_reviews);
    c.honest_cross_rate = s.get_double("synth.honest_cross_rate", c.honest_cross_rate);
    c.seed = static_cast<std::uint64_t>(s.get_int("synth.seed", static_cast<std::int64_t>(c.seed)));
    c.validate();
    return c;
  }
};

struct Scenario {
  Corpus corpus;
  GroundTruth truth;  // main products only
  std::map<std::string, StyleProfile> styles;
  std::vector<std::string> log;

  std::vector<std::string> products() const {
    std::vector<std::string> out;
    for (const auto& [p, t] : truth.products) out.push_back(p);
    return out;
  }
  std::vector<std::string> fraud_products() const {
    std::vector<std::string> out;
    for (const auto& [p, t] : truth.products)
      if (t.fraud()) out.push_back(p);
    return out;
  }
};

namespace detail {

inline std::string padded(std::size_t v, int width) {
  std::string s = std::to_string(v);
  return std::string(s.size() < std::size_t(width) ? width - s.size() : 0, '0') + s;
}

}  // namespace detail

/// Builds a corpus with planted workers. Each worker owns a private account
/// pool; all pool accounts review the worker's cover products, and each
/// targeted main product gets one review from each of a random subset of the
/// pool. Honest reviewers review one main product, occasionally a second,
/// plus a few products from a large background catalogue.
inline Scenario generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Scenario sc;
  std::size_t next_review = 0;
  const std::int64_t epoch = 1451606400;  // 2016-01-01
  auto add = [&](const std::string& account, const std::string& product, const StyleProfile& style, int rating,
                 std::int64_t day) {
    Review r;
    r.review_id = "r" + detail::padded(++next_review, 7);
    r.account_id = account;
    r.product_id = product;
    r.rating = rating;
    r.timestamp = epoch + day * 86400 + static_cast<std::int64_t>(rng.below(86400));
    r.text = generate_text(style, rng);
    sc.corpus.add_review(std::move(r));
  };

  // workers and styles
  std::vector<std::string> workers;
  std::vector<std::vector<std::string>> pools;
  for (std::size_t w = 0; w < cfg.n_workers; ++w) {
    workers.push_back("W" + detail::padded(w + 1, 2));
    const auto size = rng.between(cfg.accounts_per_worker.lo, cfg.accounts_per_worker.hi);
    std::vector<std::string> pool;
    for (std::int64_t a = 0; a < size; ++a)
      pool.push_back("acct_w" + detail::padded(w + 1, 2) + "_" + detail::padded(std::size_t(a), 3));
    pools.push_back(std::move(pool));
    sc.styles[workers.back()] = cfg.style_profiles.empty() ? random_worker_style(rng) : cfg.style_profiles[w];
  }
  const auto honest_style = background_style(cfg.seed);

  // products, fraud assignment
  std::vector<std::string> products;
  for (std::size_t p = 0; p < cfg.n_products; ++p) products.push_back("app_" + detail::padded(p, 3));
  std::size_t n_fraud = 0;
  if (cfg.n_workers > 0) {
    n_fraud = static_cast<std::size_t>(std::llround(cfg.fraud_product_fraction * double(cfg.n_products)));
    n_fraud = std::clamp<std::size_t>(n_fraud, cfg.fraud_product_fraction > 0 ? 1 : 0, cfg.n_products);
  }
  std::vector<std::size_t> order(cfg.n_products);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<bool> is_fraud(cfg.n_products, false);
  for (std::size_t i = 0; i < n_fraud; ++i) is_fraud[order[i]] = true;

  const auto max_workers = std::min<std::int64_t>(cfg.workers_per_fraud_product.hi, std::int64_t(cfg.n_workers));
  std::vector<std::size_t> worker_order(cfg.n_workers);
  for (std::size_t i = 0; i < worker_order.size(); ++i) worker_order[i] = i;
  for (std::size_t i = worker_order.size(); i > 1; --i) std::swap(worker_order[i - 1], worker_order[rng.below(i)]);

  std::vector<std::vector<std::size_t>> product_workers(cfg.n_products);
  std::size_t fraud_seen = 0, multi = 0;
  const std::size_t majority_target = static_cast<std::size_t>(std::llround(cfg.majority_fraction * double(n_fraud)));
  std::vector<bool> majority(cfg.n_products, false);
  for (std::size_t p = 0; p < cfg.n_products; ++p) {
    if (!is_fraud[p]) continue;
    // balanced: every other fraud product aims for a fraud majority
    majority[p] = fraud_seen * majority_target / std::max<std::size_t>(1, n_fraud) !=
                  (fraud_seen + 1) * majority_target / std::max<std::size_t>(1, n_fraud);
    auto& ws = product_workers[p];
    ws.push_back(worker_order[fraud_seen++ % cfg.n_workers]);
    for (std::size_t w = 0; w < cfg.n_workers; ++w)
      if (w != ws.front() && rng.bernoulli(cfg.collaboration_rate)) ws.push_back(w);
    while (std::int64_t(ws.size()) < cfg.workers_per_fraud_product.lo) {
      const auto w = rng.below(cfg.n_workers);
      if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
    }
    if (std::int64_t(ws.size()) > max_workers) ws.resize(static_cast<std::size_t>(max_workers));
    std::sort(ws.begin(), ws.end());
    if (ws.size() > 1) ++multi;
  }

  // main products
  std::size_t next_user = 0, majority_hit = 0;
  std::vector<std::pair<std::string, std::size_t>> honest_users;  // (user, home product)
  for (std::size_t p = 0; p < cfg.n_products; ++p) {
    const auto& pid = products[p];
    auto& truth = sc.truth.products[pid];
    const auto day = std::int64_t(p) * 3;
    std::int64_t fraud_reviews = 0;
    for (auto w : product_workers[p]) {
      const auto r = rng.between(cfg.reviews_per_worker_per_product.lo, cfg.reviews_per_worker_per_product.hi);
      auto chosen = detail::sample_distinct(pools[w], static_cast<std::size_t>(r), rng);
      std::sort(chosen.begin(), chosen.end());
      for (const auto& a : chosen) add(a, pid, sc.styles[workers[w]], int(rng.between(4, 5)), day + rng.between(0, 9));
      truth.workers[workers[w]].insert(chosen.begin(), chosen.end());
      fraud_reviews += r;
    }
    auto n_honest = rng.between(cfg.honest_reviewers_per_product.lo, cfg.honest_reviewers_per_product.hi);
    if (majority[p]) n_honest = std::min(n_honest, fraud_reviews - 1);
    if (is_fraud[p] && fraud_reviews > n_honest) ++majority_hit;
    for (std::int64_t h = 0; h < n_honest; ++h) {
      const auto user = "user_" + detail::padded(++next_user, 5);
      add(user, pid, honest_style, int(rng.between(1, 5)), day + rng.between(0, 29));
      truth.honest.insert(user);
      honest_users.emplace_back(user, p);
    }
  }

  // honest side activity
  std::size_t cross = 0;
  for (const auto& [user, home] : honest_users) {
    if (cfg.n_products > 1 && rng.bernoulli(cfg.honest_cross_rate)) {
      auto other = rng.below(cfg.n_products - 1);
      if (other >= home) ++other;
      add(user, products[other], honest_style, int(rng.between(1, 5)), std::int64_t(other) * 3 + rng.between(0, 29));
      sc.truth.products[products[other]].honest.insert(user);
      ++cross;
    }
    const auto extra = rng.between(cfg.honest_background_reviews.lo, cfg.honest_background_reviews.hi);
    std::set<std::uint64_t> picked;
    for (std::int64_t i = 0; i < extra; ++i) picked.insert(rng.below(cfg.background_products));
    for (auto b : picked)
      add(user, "bg_" + detail::padded(b, 4), honest_style, int(rng.between(1, 5)), rng.between(0, 365));
  }

  // cover products: every pool account reviews each of its worker's
  for (std::size_t w = 0; w < cfg.n_workers; ++w)
    for (std::size_t c = 0; c < cfg.cover_products_per_worker; ++c) {
      const auto pid = "cover_" + workers[w] + "_" + std::to_string(c);
      for (const auto& a : pools[w]) add(a, pid, sc.styles[workers[w]], int(rng.between(4, 5)), rng.between(0, 365));
    }
  for (std::size_t w = 0; w < cfg.n_workers; ++w)
    for (const auto& a : pools[w]) sc.corpus.set_attribution(a, workers[w]);

  sc.log.push_back("workers: " + std::to_string(cfg.n_workers));
  sc.log.push_back("main products: " + std::to_string(cfg.n_products) + ", fraud: " + std::to_string(n_fraud));
  sc.log.push_back("fraud products with several workers: " + std::to_string(multi));
  sc.log.push_back("fraud-majority products: " + std::to_string(majority_hit) + " (target " +
                   std::to_string(majority_target) + ")");
  sc.log.push_back("honest reviewers: " + std::to_string(honest_users.size()) + ", with a second main product: " +
                   std::to_string(cross));
  sc.log.push_back("reviews: " + std::to_string(sc.corpus.reviews().size()));
  return sc;
}

// ---------------------------------------------------------------------------
// Ground truth I/O

inline nlohmann::json to_json(const std::string& product_id, const ProductTruth& t) {
  nlohmann::json workers = nlohmann::json::object();
  for (const auto& [w, accounts] : t.workers) workers[w] = accounts;
  return {{"product_id", product_id}, {"fraud", t.fraud()}, {"workers", workers}, {"honest", t.honest}};
}

inline void write_ground_truth(std::ostream& out, const GroundTruth& gt) {
  for (const auto& [p, t] : gt.products) out << to_json(p, t).dump() << '\n';
}

inline GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth gt;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (detail::blank(text)) continue;
    const auto obj = detail::parse_line(text, line);
    try {
      const auto pid = obj.at("product_id").get<std::string>();
      ProductTruth t;
      for (const auto& [w, accounts] : obj.at("workers").items()) t.workers[w] = accounts.get<std::set<std::string>>();
      if (auto it = obj.find("honest"); it != obj.end()) t.honest = it->get<std::set<std::string>>();
      std::set<std::string> seen;
      for (const auto& [w, accounts] : t.workers)
        for (const auto& a : accounts)
          if (!seen.insert(a).second) throw ParseError(line, "account " + a + " listed under two workers");
      if (!gt.products.emplace(pid, std::move(t)).second) throw ParseError(line, "duplicate product " + pid);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line, e.what());
    }
  }
  return gt;
}

inline GroundTruth load_ground_truth(const std::string& path) {
  auto in = detail::open_input(path);
  return read_ground_truth(in);
}

}  // namespace fraudtrace
