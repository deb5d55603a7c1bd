#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "fraudtrace/common.hpp"

namespace fraudtrace::text {

/// NFC-normalizes UTF-8 text. Invalid sequences pass through ICU's
/// replacement handling.
inline std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (norm->isNormalized(src, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  const auto dst = norm->normalize(src, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

/// Decodes UTF-8 into code points; malformed bytes decode as U+FFFD.
inline std::vector<char32_t> code_points(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + static_cast<std::size_t>(len) > s.size()) {
      out.push_back(0xfffd);
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1f) : len == 3 ? (c & 0x0f) : (c & 0x07);
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((cc >> 6) != 0x2) ok = false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    out.push_back(ok ? cp : 0xfffd);
    i += ok ? static_cast<std::size_t>(len) : 1;
  }
  return out;
}

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == 0xa0 || c == 0x2028 ||
         c == 0x2029 || c == 0x3000 || (c >= 0x2000 && c <= 0x200a);
}
inline bool is_upper(char32_t c) { return c >= 'A' && c <= 'Z'; }
inline bool is_lower(char32_t c) { return c >= 'a' && c <= 'z'; }
inline bool is_letter(char32_t c) { return is_upper(c) || is_lower(c); }
inline bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

/// Tracked punctuation marks and their feature names.
inline constexpr std::pair<char32_t, const char*> kPunctuation[] = {
    {'.', "period"}, {',', "comma"},  {';', "semicolon"}, {':', "colon"},  {'!', "exclaim"}, {'?', "question"},
    {'\'', "apostrophe"}, {'"', "quote"}, {'(', "lparen"}, {')', "rparen"}, {'-', "hyphen"},
};

inline int punctuation_index(char32_t c) {
  for (int i = 0; i < static_cast<int>(std::size(kPunctuation)); ++i)
    if (kPunctuation[i].first == c) return i;
  return -1;
}

enum class TokenKind { word, number, punct, symbol };

struct Token {
  TokenKind kind;
  std::string text;  // words are lower-cased; apostrophes kept
  bool capitalized = false;
  bool all_caps = false;
};

/// Splits one review into words (ASCII letters with inner apostrophes),
/// numbers (digit runs with inner '.' or ','), tracked punctuation marks and
/// other symbols. Whitespace separates and is dropped.
inline std::vector<Token> tokenize(const std::vector<char32_t>& cps) {
  std::vector<Token> out;
  const std::size_t n = cps.size();
  for (std::size_t i = 0; i < n;) {
    const char32_t c = cps[i];
    if (is_space(c)) {
      ++i;
    } else if (is_letter(c)) {
      Token t{TokenKind::word, {}, is_upper(c), true};
      std::size_t letters = 0;
      while (i < n && (is_letter(cps[i]) || (cps[i] == '\'' && i + 1 < n && is_letter(cps[i + 1]) && !t.text.empty()))) {
        if (is_letter(cps[i])) {
          ++letters;
          if (!is_upper(cps[i])) t.all_caps = false;
          t.text.push_back(static_cast<char>(is_upper(cps[i]) ? cps[i] - 'A' + 'a' : cps[i]));
        } else {
          t.text.push_back('\'');
        }
        ++i;
      }
      if (letters < 2) t.all_caps = false;
      out.push_back(std::move(t));
    } else if (is_digit(c)) {
      Token t{TokenKind::number, {}, false, false};
      while (i < n && (is_digit(cps[i]) || ((cps[i] == '.' || cps[i] == ',') && i + 1 < n && is_digit(cps[i + 1])))) {
        t.text.push_back(static_cast<char>(cps[i]));
        ++i;
      }
      out.push_back(std::move(t));
    } else if (punctuation_index(c) >= 0) {
      out.push_back({TokenKind::punct, std::string(1, static_cast<char>(c)), false, false});
      ++i;
    } else {
      out.push_back({TokenKind::symbol, "sym", false, false});
      ++i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Part-of-speech tagging

/// Coarse tag set of the bundled tagger.
inline constexpr const char* kPosTags[] = {"ADJ", "ADP", "ADV", "AUX",  "CONJ", "DET",   "INTJ", "NOUN",
                                           "NUM", "PRON", "PROPN", "PRT", "PUNCT", "SYM", "VERB"};

namespace detail {

struct Lexicon {
  std::unordered_map<std::string, const char*> closed;

  Lexicon() {
    auto add = [&](const char* tag, std::initializer_list<const char*> words) {
      for (auto* w : words) closed.emplace(w, tag);
    };
    add("DET", {"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no", "all",
                "another", "such", "both", "either", "neither", "much", "many", "few", "several"});
    add("PRON", {"i",    "me",    "my",    "mine",  "you",    "your",   "yours",  "he",    "him",   "his",
                 "she",  "her",   "hers",  "it",    "its",    "we",     "us",     "our",   "ours",  "they",
                 "them", "their", "theirs", "myself", "yourself", "itself", "themselves", "who", "whom", "whose",
                 "which", "what", "everyone", "everything", "someone", "something", "anyone", "anything",
                 "nobody", "nothing", "i'm", "i've", "i'll", "i'd", "you're", "you've", "you'll", "it's", "that's",
                 "they're", "we're", "there's", "what's", "let's"});
    add("ADP", {"in",     "on",     "at",      "by",     "for",   "with",  "about", "against", "between", "into",
                "through", "during", "before", "after",  "above", "below", "from",  "up",      "down",    "out",
                "off",    "over",   "under",   "of",     "since", "without", "within", "like",  "than", "per",
                "across", "around", "behind",  "beyond", "near", "toward", "towards", "upon"});
    add("CONJ", {"and", "but", "or", "nor", "so", "yet", "because", "although", "though", "while", "if", "unless",
                 "whereas", "whether", "until", "when", "where", "once"});
    add("AUX", {"is",     "am",      "are",    "was",    "were",   "be",     "been",     "being",   "have",
                "has",    "had",     "do",     "does",   "did",    "will",   "would",    "shall",   "should",
                "can",    "could",   "may",    "might",  "must",   "isn't",  "aren't",   "wasn't",  "weren't",
                "don't",  "doesn't", "didn't", "won't",  "can't",  "couldn't", "shouldn't", "wouldn't",
                "haven't", "hasn't", "hadn't"});
    add("PRT", {"not", "to", "n't"});
    add("ADV", {"very",   "really", "so",    "too",   "also",    "just",    "now",    "then",  "here",
                "there",  "always", "never", "often", "still",   "even",    "again",  "ever",  "soon",
                "already", "quite", "almost", "well", "highly", "definitely", "absolutely", "totally",
                "pretty", "super",  "most",  "more",  "less",    "least",   "only",   "why",   "how",
                "honestly", "seriously", "literally", "basically", "probably", "actually", "especially"});
    add("INTJ", {"wow", "omg", "lol", "yes", "yeah", "ok", "okay", "oh", "hey", "thanks", "please", "hi",
                 "hello", "ugh", "wtf", "yay", "haha"});
    add("ADJ", {"good",    "great",   "best",   "better", "bad",       "worst",   "nice",    "awesome",
                "amazing", "cool",    "easy",   "simple", "fast",      "slow",    "new",     "old",
                "big",     "small",   "free",   "fun",    "excellent", "perfect", "useful",  "helpful",
                "fantastic", "wonderful", "beautiful", "brilliant", "superb", "incredible", "terrible",
                "horrible", "awful",  "poor",   "happy",  "smooth",    "clean",   "friendly", "reliable",
                "addictive", "favorite", "favourite", "five", "top", "real", "full", "high", "low", "quick"});
    add("VERB", {"love",  "loved", "like",   "liked",    "use",     "used",     "get",   "got",
                 "make",  "made",  "go",     "went",     "play",    "try",      "tried", "recommend",
                 "download", "install", "work",  "works", "keep",    "keeps",    "need",  "want",
                 "say",   "said",  "see",    "saw",      "know",    "think",    "enjoy", "enjoyed",
                 "help",  "helps", "crash",  "crashes",  "update",  "rate",     "give",  "gave",
                 "find",  "found", "take",   "took",     "let",     "feel",     "look",  "looks"});
  }
};

inline const Lexicon& lexicon() {
  static const Lexicon lex;
  return lex;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace detail

/// Closed-class lexicon lookup, then suffix rules; NOUN by default.
/// Capitalized words not at sentence start are proper nouns.
inline const char* pos_tag(const Token& t, bool sentence_start) {
  switch (t.kind) {
    case TokenKind::number:
      return "NUM";
    case TokenKind::punct:
      return "PUNCT";
    case TokenKind::symbol:
      return "SYM";
    case TokenKind::word:
      break;
  }
  const auto& lex = detail::lexicon().closed;
  if (auto it = lex.find(t.text); it != lex.end()) return it->second;
  if (t.capitalized && !sentence_start && !t.all_caps) return "PROPN";
  using detail::ends_with;
  const std::string_view w = t.text;
  if (ends_with(w, "ly")) return "ADV";
  if (ends_with(w, "ing") || ends_with(w, "ed") || ends_with(w, "ize") || ends_with(w, "ise") || ends_with(w, "ify"))
    return "VERB";
  if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") || ends_with(w, "able") ||
      ends_with(w, "ible") || ends_with(w, "al") || ends_with(w, "ic") || ends_with(w, "less") || ends_with(w, "est") ||
      ends_with(w, "ish") || ends_with(w, "y"))
    return "ADJ";
  return "NOUN";
}

/// Tags a token sequence. Sentence starts follow '.', '!' and '?'.
inline std::vector<const char*> pos_tags(const std::vector<Token>& tokens) {
  std::vector<const char*> tags;
  tags.reserve(tokens.size());
  bool start = true;
  for (const auto& t : tokens) {
    tags.push_back(pos_tag(t, start));
    start = t.kind == TokenKind::punct && (t.text == "." || t.text == "!" || t.text == "?");
  }
  return tags;
}

// ---------------------------------------------------------------------------
// Spelling

/// Bundled English word list with light inflection handling.
class Dictionary {
 public:
  static const Dictionary& english() {
    static const Dictionary dict = [] {
      Dictionary d;
      static constexpr std::string_view chunks[] = {
#include "fraudtrace/detail/english_words.inc"
      };
      for (auto chunk : chunks) {
        std::size_t start = 0;
        while (start < chunk.size()) {
          auto end = chunk.find('\n', start);
          if (end == std::string_view::npos) end = chunk.size();
          if (end > start) d.words_.emplace(chunk.substr(start, end - start));
          start = end + 1;
        }
      }
      return d;
    }();
    return dict;
  }

  bool contains_exact(std::string_view w) const { return words_.contains(std::string(w)); }

  /// True when `word` (lower-case letters, maybe apostrophes) is a known word
  /// or a regular inflection of one.
  bool known(std::string_view word) const {
    if (word.empty()) return true;
    static const std::unordered_set<std::string> contractions = {
        "don't", "can't", "won't", "isn't", "aren't", "wasn't", "weren't", "doesn't", "didn't", "couldn't",
        "shouldn't", "wouldn't", "haven't", "hasn't", "hadn't", "i'm", "i've", "i'll", "i'd", "you're", "you've",
        "you'll", "it's", "that's", "they're", "we're", "there's", "what's", "let's", "he's", "she's"};
    std::string w(word);
    if (contractions.contains(w)) return true;
    if (detail::ends_with(w, "'s")) w.resize(w.size() - 2);
    std::erase(w, '\'');
    if (w.empty() || contains_exact(w)) return true;
    auto root_known = [&](std::string_view root) { return root.size() >= 2 && contains_exact(root); };
    auto strip = [&](std::string_view suf) -> std::string_view {
      return detail::ends_with(w, suf) ? std::string_view(w).substr(0, w.size() - suf.size()) : std::string_view{};
    };
    for (std::string_view suf : {"s", "es", "ed", "d", "ing", "ly", "er", "est", "ness", "ment"}) {
      auto root = strip(suf);
      if (root.empty()) continue;
      if (root_known(root)) return true;
      // stopped -> stop, making -> make
      if (root.size() >= 3 && root[root.size() - 1] == root[root.size() - 2] && root_known(root.substr(0, root.size() - 1)))
        return true;
      if ((suf == "ing" || suf == "ed" || suf == "er" || suf == "est") && root_known(std::string(root) + "e"))
        return true;
    }
    for (std::string_view suf : {"ies", "ied", "ily", "ier", "iest"}) {
      auto root = strip(suf);
      if (!root.empty() && root_known(std::string(root) + "y")) return true;
    }
    return false;
  }

  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

}  // namespace fraudtrace::text
