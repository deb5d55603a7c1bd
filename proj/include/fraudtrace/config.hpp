#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fraudtrace/common.hpp"

namespace fraudtrace {

/// Inclusive integer range, written "lo..hi" or a single "n".
struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
  std::string str() const { return lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi); }
  friend bool operator==(const Range&, const Range&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::int64_t parse_int(const std::string& key, std::string_view v) {
  std::int64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + std::string(v) + "'");
  return x;
}

}  // namespace detail

/// Flat dotted `key=value` settings. Lines starting with '#' are comments.
/// Later assignments override earlier ones. Typed getters take the default
/// used when a key is absent and remember which keys were read, so callers
/// can reject typos via `unused()`.
class Settings {
 public:
  static Settings parse(std::istream& in, const std::string& origin = "<config>") {
    Settings s;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      const auto t = detail::trim(line);
      if (t.empty() || t.front() == '#') continue;
      try {
        s.assign(t);
      } catch (const ConfigError& e) {
        throw ConfigError(origin + ":" + std::to_string(no) + ": " + e.what());
      }
    }
    return s;
  }

  static Settings load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse(in, path);
  }

  /// Applies one "key=value" assignment.
  void assign(std::string_view kv) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(kv) + "'");
    auto key = detail::trim(kv.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key in '" + std::string(kv) + "'");
    values_[key] = detail::trim(kv.substr(eq + 1));
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.contains(key); }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& def) const {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
  }

  std::int64_t get_int(const std::string& key, std::int64_t def) const {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? def : detail::parse_int(key, it->second);
  }

  std::size_t get_size(const std::string& key, std::size_t def) const {
    const auto v = get_int(key, static_cast<std::int64_t>(def));
    if (v < 0) throw ConfigError(key + " must be non-negative");
    return static_cast<std::size_t>(v);
  }

  double get_double(const std::string& key, double def) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::istringstream in(it->second);
    in.imbue(std::locale::classic());
    double x;
    if (!(in >> x) || !(in >> std::ws).eof()) throw ConfigError(key + ": expected a number, got '" + it->second + "'");
    return x;
  }

  bool get_bool(const std::string& key, bool def) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + it->second + "'");
  }

  Range get_range(const std::string& key, Range def) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    const std::string& v = it->second;
    Range r;
    if (auto dots = v.find(".."); dots != std::string::npos) {
      r.lo = detail::parse_int(key, detail::trim(v.substr(0, dots)));
      r.hi = detail::parse_int(key, detail::trim(v.substr(dots + 2)));
    } else {
      r.lo = r.hi = detail::parse_int(key, v);
    }
    if (r.lo > r.hi) throw ConfigError(key + ": empty range " + v);
    return r;
  }

  /// Keys present but never read, typically typos.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.contains(k)) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace fraudtrace
