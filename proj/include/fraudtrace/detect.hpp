#pragma once

#include <string>
#include <string_view>

#include "fraudtrace/dsg.hpp"
#include "fraudtrace/mcdense.hpp"

namespace fraudtrace {

enum class Algorithm { mcdense, dsg };

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "mcdense") return Algorithm::mcdense;
  if (s == "dsg") return Algorithm::dsg;
  throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected mcdense or dsg)");
}

inline const char* algorithm_name(Algorithm a) { return a == Algorithm::mcdense ? "mcdense" : "dsg"; }

/// DSG baseline run on the same detection graph as MCDense, reported with
/// the same component schema.
inline Partition dsg_partition(const Corpus& corpus, const std::string& product_id, const DensityConfig& cfg = {}) {
  cfg.validate();
  const auto g = detection_graph(corpus, product_id, cfg);
  std::vector<FraudComponent> comps;
  for (const auto& ids : dsg_components(g, cfg.eta)) {
    const auto sub = g.induced(ids);
    comps.push_back(detail::as_component(sub, triangle_density(sub)));
  }
  return make_partition(corpus, product_id, std::move(comps));
}

inline Partition detect_product(const Corpus& corpus, const std::string& product_id, const DensityConfig& cfg,
                                Algorithm algo) {
  return algo == Algorithm::mcdense ? partition_product(corpus, product_id, cfg)
                                    : dsg_partition(corpus, product_id, cfg);
}

}  // namespace fraudtrace
