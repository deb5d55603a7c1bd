#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "fraudtrace/classify.hpp"
#include "fraudtrace/common.hpp"
#include "fraudtrace/graph.hpp"

namespace fraudtrace {

struct WalkConfig {
  std::size_t gamma = 80;      // walks per node
  std::size_t walk_len = 100;  // maximum walk length, in nodes
  std::size_t window = 5;      // skip-gram context window
  std::size_t dims = 300;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::size_t threads = 1;  // > 1 trades exact reproducibility for speed
  std::uint64_t seed = 1;

  void validate() const {
    if (gamma == 0 || walk_len == 0 || window == 0 || dims == 0 || epochs == 0 || negatives == 0)
      throw ConfigError("embed parameters must be positive");
    if (window >= walk_len) throw ConfigError("embed.window must be smaller than embed.walk_len");
    if (!(learning_rate > 0)) throw ConfigError("embed.learning_rate must be positive");
    if (dims > (std::size_t{1} << 20)) throw ConfigError("embed.dims too large");
  }
};

using Walk = std::vector<NodeId>;

/// gamma truncated random walks from every node. The next hop is drawn with
/// probability proportional to edge weight, i.e. uniformly over the
/// multigraph with w_ij parallel edges. Walks stop at isolated nodes. Each
/// walk has its own RNG stream derived from (seed, round, start node), so
/// output does not depend on `threads`. Order: round-major, then node id.
inline std::vector<Walk> random_walks(const WeightedGraph& g, const WalkConfig& cfg) {
  cfg.validate();
  if (g.empty()) throw Error("random walks on an empty graph");
  const std::size_t n = g.node_count();
  std::vector<std::vector<Weight>> prefix(n);
  for (NodeId u = 0; u < n; ++u) {
    Weight s = 0;
    for (const auto& nb : g.neighbors(u)) prefix[u].push_back(s += nb.weight);
  }
  std::vector<Walk> walks(cfg.gamma * n);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const auto round = idx / n;
      const auto start = static_cast<NodeId>(idx % n);
      Rng rng(splitmix64(cfg.seed ^ splitmix64(round * 0x1000003ULL + start)));
      Walk& w = walks[idx];
      w.reserve(cfg.walk_len);
      w.push_back(start);
      while (w.size() < cfg.walk_len) {
        const auto& pre = prefix[w.back()];
        if (pre.empty()) break;
        const auto r = static_cast<Weight>(rng.below(static_cast<std::uint64_t>(pre.back())));
        const auto pos = std::upper_bound(pre.begin(), pre.end(), r) - pre.begin();
        w.push_back(g.neighbors(w.back())[static_cast<std::size_t>(pos)].node);
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, walks.size()));
  if (threads == 1) {
    run(0, walks.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (walks.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(run, std::min(walks.size(), t * chunk), std::min(walks.size(), (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  return walks;
}

/// Node vectors, row-major, one row per node.
struct Embedding {
  std::vector<std::string> nodes;  // sorted
  std::size_t dims = 0;
  std::vector<float> data;
  std::vector<double> epoch_loss;  // mean loss per training pair, per epoch

  std::span<const float> row(std::size_t i) const { return {data.data() + i * dims, dims}; }

  std::optional<std::size_t> find(const std::string& node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
  }

  std::vector<double> vector_of(const std::string& node) const {
    auto i = find(node);
    if (!i) throw Error("no embedding for node " + node);
    auto r = row(*i);
    return {r.begin(), r.end()};
  }
};

namespace detail {

inline float sigmoid(float x) {
  if (x > 8.f) return 1.f;
  if (x < -8.f) return 0.f;
  return 1.f / (1.f + std::exp(-x));
}

// Eight partial sums so the reduction vectorizes without reassociation.
inline float dot(const float* __restrict a, const float* __restrict b, std::size_t d) {
  float acc[8] = {};
  std::size_t k = 0;
  for (; k + 8 <= d; k += 8)
    for (std::size_t j = 0; j < 8; ++j) acc[j] += a[k + j] * b[k + j];
  float s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; k < d; ++k) s += a[k] * b[k];
  return s;
}

inline void sgns_update(float* __restrict grad, float* __restrict out, const float* __restrict in, float g,
                        std::size_t d) {
  for (std::size_t k = 0; k < d; ++k) {
    grad[k] += g * out[k];
    out[k] += g * in[k];
  }
}

}  // namespace detail

/// Skip-gram with negative sampling over (center, context) pairs within
/// `window` positions. Negatives follow the unigram^0.75 distribution of the
/// walk corpus; the learning rate decays linearly to 1e-4 of its start.
/// With threads == 1 the result is a pure function of (walks, nodes, cfg).
inline Embedding train_embedding(std::span<const Walk> walks, std::vector<std::string> nodes, const WalkConfig& cfg) {
  cfg.validate();
  const std::size_t n = nodes.size();
  if (n == 0) throw Error("no nodes to embed");
  if (n > std::numeric_limits<std::size_t>::max() / cfg.dims / sizeof(float)) throw ConfigError("embedding too large");
  const std::size_t d = cfg.dims;
  Embedding emb;
  emb.nodes = std::move(nodes);
  emb.dims = d;
  emb.data.resize(n * d);
  Rng init(cfg.seed);
  for (auto& x : emb.data) x = static_cast<float>((init.uniform() - 0.5) / double(d));
  std::vector<float> ctx(n * d, 0.f);

  std::vector<double> freq(n, 0.0);
  std::size_t tokens = 0;
  for (const auto& w : walks) {
    for (auto v : w) {
      if (v >= n) throw Error("walk references unknown node");
      freq[v] += 1;
    }
    tokens += w.size();
  }
  if (tokens == 0) return emb;
  std::vector<double> cdf(n);
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) cdf[i] = acc += std::pow(freq[i], 0.75);

  const double total_steps = double(cfg.epochs) * double(tokens);
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, walks.size()));
  std::vector<double> thread_loss(threads), thread_pairs(threads);
  std::vector<std::size_t> thread_done(threads);

  auto train_range = [&](std::size_t tid, std::size_t epoch, std::size_t begin, std::size_t end) {
    Rng rng(splitmix64(cfg.seed + 0x9e37 * (epoch + 1) + tid));
    std::vector<float> grad(d);
    double loss = 0, pairs = 0;
    std::size_t done = 0;
    // token position shared across threads only approximately
    const double base = double(epoch) * double(tokens) + double(begin) / double(walks.size()) * double(tokens);
    for (std::size_t wi = begin; wi < end; ++wi) {
      const auto& walk = walks[wi];
      for (std::size_t pos = 0; pos < walk.size(); ++pos, ++done) {
        const double progress = (base + double(done)) / total_steps;
        const float lr = static_cast<float>(cfg.learning_rate * std::max(1e-4, 1.0 - progress));
        const auto center = walk[pos];
        const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
        const std::size_t hi = std::min(walk.size() - 1, pos + cfg.window);
        for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
          if (cpos == pos) continue;
          float* in = &emb.data[center * d];
          std::fill(grad.begin(), grad.end(), 0.f);
          for (std::size_t s = 0; s <= cfg.negatives; ++s) {
            std::size_t target;
            float label;
            if (s == 0) {
              target = walk[cpos];
              label = 1.f;
            } else {
              const double r = rng.uniform() * acc;
              target = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
              if (target >= n) target = n - 1;
              if (target == walk[cpos]) continue;
              label = 0.f;
            }
            float* out = &ctx[target * d];
            const float p = detail::sigmoid(detail::dot(in, out, d));
            loss -= std::log(std::max(1e-7, double(label > 0 ? p : 1.f - p)));
            const float gscale = (label - p) * lr;
            detail::sgns_update(grad.data(), out, in, gscale, d);
          }
          for (std::size_t k = 0; k < d; ++k) in[k] += grad[k];
          pairs += 1;
        }
      }
    }
    thread_loss[tid] = loss;
    thread_pairs[tid] = pairs;
    thread_done[tid] = done;
  };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (threads == 1) {
      train_range(0, epoch, 0, walks.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (walks.size() + threads - 1) / threads;
      for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back(train_range, t, epoch, std::min(walks.size(), t * chunk),
                          std::min(walks.size(), (t + 1) * chunk));
      for (auto& th : pool) th.join();
    }
    double loss = 0, pairs = 0;
    for (std::size_t t = 0; t < threads; ++t) {
      loss += thread_loss[t];
      pairs += thread_pairs[t];
    }
    emb.epoch_loss.push_back(pairs > 0 ? loss / pairs : 0.0);
  }
  return emb;
}

inline Embedding embed_graph(const WeightedGraph& g, const WalkConfig& cfg) {
  const auto walks = random_walks(g, cfg);
  return train_embedding(walks, g.nodes(), cfg);
}

inline double cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  return (aa == 0 || bb == 0) ? 0.0 : ab / std::sqrt(aa * bb);
}

// Binary layout: "FTEMB001", u64 rows, u64 dims, rows*dims little-endian
// float32, row-major. Node names go to a sidecar, one per line.
inline void save_embedding(const Embedding& emb, const std::string& matrix_path, const std::string& nodes_path) {
  std::ofstream bin(matrix_path, std::ios::binary | std::ios::trunc);
  if (!bin) throw DataError("cannot write " + matrix_path);
  bin.write("FTEMB001", 8);
  const std::uint64_t rows = emb.nodes.size(), dims = emb.dims;
  static_assert(std::endian::native == std::endian::little, "embedding files are little-endian");
  bin.write(reinterpret_cast<const char*>(&rows), 8);
  bin.write(reinterpret_cast<const char*>(&dims), 8);
  bin.write(reinterpret_cast<const char*>(emb.data.data()), static_cast<std::streamsize>(emb.data.size() * sizeof(float)));
  std::ofstream side(nodes_path, std::ios::binary | std::ios::trunc);
  if (!side) throw DataError("cannot write " + nodes_path);
  for (const auto& nd : emb.nodes) side << nd << '\n';
}

inline Embedding load_embedding(const std::string& matrix_path, const std::string& nodes_path) {
  std::ifstream bin(matrix_path, std::ios::binary);
  if (!bin) throw DataError("cannot open " + matrix_path);
  char magic[8];
  std::uint64_t rows = 0, dims = 0;
  bin.read(magic, 8);
  bin.read(reinterpret_cast<char*>(&rows), 8);
  bin.read(reinterpret_cast<char*>(&dims), 8);
  if (!bin || std::memcmp(magic, "FTEMB001", 8) != 0) throw DataError(matrix_path + ": not an embedding file");
  Embedding emb;
  emb.dims = dims;
  emb.data.resize(rows * dims);
  bin.read(reinterpret_cast<char*>(emb.data.data()), static_cast<std::streamsize>(emb.data.size() * sizeof(float)));
  if (!bin) throw DataError(matrix_path + ": truncated");
  std::ifstream side(nodes_path);
  if (!side) throw DataError("cannot open " + nodes_path);
  for (std::string line; std::getline(side, line);)
    if (!line.empty()) emb.nodes.push_back(line);
  if (emb.nodes.size() != rows) throw DataError(nodes_path + ": node count does not match matrix rows");
  if (!std::is_sorted(emb.nodes.begin(), emb.nodes.end())) throw DataError(nodes_path + ": nodes not sorted");
  return emb;
}

struct GbaConfig {
  double threshold = 0.5;
  std::string classifier = "logistic";
  std::size_t k = 5;
};

struct GbaLabel {
  std::string worker_id;
  double score = 0;

  friend bool operator==(const GbaLabel&, const GbaLabel&) = default;
};

/// Guilt by association: trains on labelled node vectors and labels each
/// unlabelled node with its most probable worker when that probability
/// reaches `threshold`; less confident nodes are left out.
inline std::map<std::string, GbaLabel> guilt_by_association(const Embedding& emb,
                                                            const std::map<std::string, std::string>& labels,
                                                            const std::set<std::string>& unlabeled,
                                                            const GbaConfig& cfg = {}) {
  std::set<std::string> classes;
  for (const auto& [node, w] : labels) classes.insert(w);
  if (classes.size() < 2) throw Error("guilt by association needs at least 2 labelled workers");
  if (unlabeled.empty()) return {};
  Matrix x;
  std::vector<std::string> y;
  for (const auto& [node, w] : labels) {
    x.push_back(emb.vector_of(node));
    y.push_back(w);
  }
  auto clf = make_classifier(cfg.classifier, cfg.k);
  clf->fit(x, y);
  std::map<std::string, GbaLabel> out;
  for (const auto& node : unlabeled) {
    const auto ranked = clf->rank(emb.vector_of(node));
    if (ranked.front().probability >= cfg.threshold) out[node] = {ranked.front().worker_id, ranked.front().probability};
  }
  return out;
}

}  // namespace fraudtrace
