#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fraudtrace/fraudtrace.hpp"

namespace ft_test {

using namespace fraudtrace;

/// Symmetric weight matrix; 0 = no edge.
using AdjMatrix = std::vector<std::vector<Weight>>;

inline std::string node_name(std::size_t i) {
  std::string s = std::to_string(i);
  return "n" + std::string(3 - s.size(), '0') + s;
}

inline WeightedGraph graph_from_matrix(const AdjMatrix& m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m.size(); ++i) names.push_back(node_name(i));
  std::vector<Edge> edges;
  for (NodeId i = 0; i < m.size(); ++i)
    for (NodeId j = i + 1; j < m.size(); ++j)
      if (m[i][j] > 0) edges.push_back({i, j, m[i][j]});
  return WeightedGraph(std::move(names), edges);
}

inline AdjMatrix random_matrix(Rng& rng, std::size_t n, double p, Weight max_w) {
  AdjMatrix m(n, std::vector<Weight>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) m[i][j] = m[j][i] = rng.between(1, max_w);
  return m;
}

/// Cliques over consecutive node blocks, plus extra edges.
inline AdjMatrix cliques(const std::vector<std::size_t>& sizes, Weight w = 1) {
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  AdjMatrix m(n, std::vector<Weight>(n, 0));
  std::size_t base = 0;
  for (auto s : sizes) {
    for (std::size_t i = base; i < base + s; ++i)
      for (std::size_t j = i + 1; j < base + s; ++j) m[i][j] = m[j][i] = w;
    base += s;
  }
  return m;
}

inline void link(AdjMatrix& m, std::size_t i, std::size_t j, Weight w) { m[i][j] = m[j][i] = w; }

// ---------------------------------------------------------------------------
// Brute-force oracles on the raw matrix

inline std::int64_t oracle_triangles(const AdjMatrix& m, std::uint64_t mask = ~std::uint64_t{0}) {
  std::int64_t t = 0;
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        if ((mask >> a & 1) && (mask >> b & 1) && (mask >> c & 1) && m[a][b] && m[b][c] && m[a][c]) ++t;
  return t;
}

inline std::int64_t oracle_edges(const AdjMatrix& m) {
  std::int64_t e = 0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (m[a][b]) ++e;
  return e;
}

/// Minimum crossing weight over all 2^(n-1)-1 proper bipartitions.
inline Weight oracle_min_cut(const AdjMatrix& m) {
  const std::size_t n = m.size();
  Weight best = -1;
  // node n-1 always on side 0
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    Weight w = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (((mask >> a) & 1) != ((mask >> b) & 1)) w += m[a][b];
    if (best < 0 || w < best) best = w;
  }
  return best;
}

inline Weight crossing_weight(const AdjMatrix& m, const std::vector<NodeId>& side) {
  std::vector<bool> in(m.size(), false);
  for (auto u : side) in[u] = true;
  Weight w = 0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (in[a] != in[b]) w += m[a][b];
  return w;
}

/// Maximum t(U)/|U| over every non-empty subset.
inline Rational oracle_densest(const AdjMatrix& m) {
  Rational best(0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m.size()); ++mask) {
    const auto size = static_cast<std::int64_t>(std::popcount(mask));
    const Rational d(oracle_triangles(m, mask), size);
    if (d > best) best = d;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Corpus fixtures

class CorpusBuilder {
 public:
  CorpusBuilder& review(const std::string& account, const std::string& product, const std::string& text = "fine",
                        std::int64_t ts = 0, std::optional<std::string> snapshot = std::nullopt) {
    Review r;
    r.review_id = "r" + std::to_string(next_++);
    r.account_id = account;
    r.product_id = product;
    r.text = text;
    r.rating = 5;
    r.timestamp = ts ? ts : static_cast<std::int64_t>(next_);
    r.snapshot_id = std::move(snapshot);
    corpus_.add_review(std::move(r));
    return *this;
  }

  CorpusBuilder& label(const std::string& account, const std::string& worker) {
    corpus_.set_attribution(account, worker);
    return *this;
  }

  Corpus build() const { return corpus_; }
  Corpus& corpus() { return corpus_; }

 private:
  Corpus corpus_;
  std::size_t next_ = 1;
};

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("fraudtrace_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace ft_test
