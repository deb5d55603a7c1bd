// Command-line front end: corpus ingestion, detection, embedding, training,
// attribution, evaluation, validation, scenario generation and benchmarks.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fraudtrace/fraudtrace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fraudtrace;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out;
  std::string corpus;
  std::string attributions;
  std::string groundtruth;
  std::string algorithm;
  std::string model;
  std::string detect_report;
  std::string report;
  std::string embedding_dir;
  std::string features_csv;
  std::vector<std::string> products;
  std::int64_t seed = -1;
  std::size_t threads = 0;
  bool export_graphs = false;
  bool quiet = false;
};

class Run {
 public:
  Run(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {
    if (!opt.config_file.empty())
      settings_ = Settings::load(opt.config_file);
    else if (const char* env = std::getenv("FRAUDTRACE_CONFIG"); env && *env)
      settings_ = Settings::load(env);
    for (const auto& kv : opt.sets) settings_.assign(kv);
    auto flag = [&](const std::string& value, const char* key) {
      if (!value.empty()) settings_.set(key, value);
    };
    flag(opt.out, "paths.output");
    flag(opt.corpus, "paths.corpus");
    flag(opt.attributions, "paths.attributions");
    flag(opt.groundtruth, "paths.groundtruth");
    flag(opt.algorithm, "detect.algorithm");
    if (opt.seed >= 0) settings_.set("run.seed", std::to_string(opt.seed));
    if (opt.threads > 0) settings_.set("run.threads", std::to_string(opt.threads));
    cfg_ = PipelineConfig::from_settings(settings_);
    if (auto unknown = settings_.unused(); !unknown.empty()) throw ConfigError("unknown config key " + unknown.front());
    out_ = cfg_.output_dir;
    fs::create_directories(out_);
  }

  const PipelineConfig& cfg() const { return cfg_; }
  const Options& opt() const { return opt_; }
  fs::path path(const std::string& name) const { return out_ / name; }

  void log(const std::string& line) const {
    if (!opt_.quiet) std::cout << line << '\n';
  }

  /// Report skeleton naming its command and config hash.
  json report() const { return {{"command", command_}, {"config_hash", cfg_.hash()}}; }

  void write_json(const std::string& name, const json& j) {
    std::ofstream f(path(name), std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path(name).string());
    f << j.dump(2) << '\n';
    outputs_.push_back(name);
  }

  std::ofstream open(const std::string& name) {
    std::ofstream f(path(name), std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path(name).string());
    outputs_.push_back(name);
    return f;
  }

  void note_output(const std::string& name) { outputs_.push_back(name); }

  Corpus corpus(bool need_attributions = false) const {
    if (cfg_.corpus_path.empty()) throw ConfigError("no corpus given (--corpus or paths.corpus)");
    Diagnostics diag;
    auto c = load_corpus(cfg_.corpus_path, &diag);
    if (!cfg_.attributions_path.empty())
      c = load_attributions(cfg_.attributions_path, std::move(c), &diag);
    else if (need_attributions)
      throw ConfigError("no attributions given (--attributions or paths.attributions)");
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
    return c;
  }

  std::vector<std::string> products(const Corpus& c) const {
    if (!opt_.products.empty()) {
      for (const auto& p : opt_.products)
        if (!c.has_product(p)) throw DataError("unknown product " + p);
      return opt_.products;
    }
    return {c.products().begin(), c.products().end()};
  }

  /// Manifest with everything that may differ between identical reruns.
  void finish() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    json params = json::object();
    for (const auto& [k, v] : cfg_.parameters()) params[k] = v;
    json m = {{"command", command_},   {"config_hash", cfg_.hash()}, {"seed", cfg_.seed},
              {"version", kVersion},   {"created_at", ts.str()},     {"outputs", outputs_},
              {"parameters", params}};
    std::ofstream f(path(command_ + ".manifest.json"), std::ios::binary | std::ios::trunc);
    f << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  const Options& opt_;
  Settings settings_;
  PipelineConfig cfg_;
  fs::path out_;
  std::vector<std::string> outputs_;
};

std::vector<Partition> detect_all(const Corpus& corpus, const std::vector<std::string>& products,
                                  const PipelineConfig& cfg) {
  std::vector<Partition> parts(products.size());
  parallel_for(products.size(), cfg.threads,
               [&](std::size_t i) { parts[i] = detect_product(corpus, products[i], cfg.density, cfg.algorithm); });
  return parts;
}

std::vector<Partition> read_detect_report(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open detect report " + file);
  try {
    const auto j = json::parse(in);
    std::vector<Partition> parts;
    for (const auto& p : j.at("products")) parts.push_back(partition_from_json(p));
    return parts;
  } catch (const json::exception& e) {
    throw DataError(file + ": " + e.what());
  }
}

AttributionModel read_model(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open model " + file);
  try {
    return AttributionModel::from_json(json::parse(in).at("model"));
  } catch (const json::exception& e) {
    throw DataError(file + ": " + e.what());
  }
}

void write_corpus_files(Run& run, const Corpus& corpus) {
  auto reviews = run.open("reviews.jsonl");
  write_corpus(reviews, corpus);
  auto attr = run.open("attributions.jsonl");
  write_attributions(attr, corpus.attributions());
}

// ---------------------------------------------------------------------------

void cmd_ingest(Run& run) {
  Diagnostics diag;
  const auto& cfg = run.cfg();
  if (cfg.corpus_path.empty()) throw ConfigError("no corpus given (--corpus or paths.corpus)");
  auto corpus = load_corpus(cfg.corpus_path, &diag);
  if (!cfg.attributions_path.empty()) corpus = load_attributions(cfg.attributions_path, std::move(corpus), &diag);
  std::map<std::string, std::size_t> workers;
  for (const auto& [a, w] : corpus.attributions()) ++workers[w];
  json products = json::object();
  for (const auto& p : corpus.products()) products[p] = corpus.reviews_of_product(p).size();
  auto rep = run.report();
  rep["reviews"] = corpus.reviews().size();
  rep["accounts"] = corpus.accounts().size();
  rep["products"] = products;
  rep["attributed_accounts"] = corpus.attributions().size();
  rep["workers"] = workers;
  rep["warnings"] = diag.warnings;
  rep["skipped"] = diag.skipped;
  run.write_json("ingest.json", rep);
  run.log("ingested " + std::to_string(corpus.reviews().size()) + " reviews, " +
          std::to_string(corpus.accounts().size()) + " accounts, " + std::to_string(corpus.products().size()) +
          " products");
}

void cmd_detect(Run& run) {
  const auto& cfg = run.cfg();
  const auto corpus = run.corpus();
  const auto products = run.products(corpus);
  const auto parts = detect_all(corpus, products, cfg);
  auto rep = run.report();
  rep["algorithm"] = algorithm_name(cfg.algorithm);
  rep["density"] = {{"eta", cfg.density.eta},
                    {"tau", to_json(cfg.density.tau)},
                    {"min_edge_weight", cfg.density.min_edge_weight},
                    {"scope", cfg.density.scope == CoActivityScope::beyond_target ? "beyond_target" : "all_products"}};
  json list = json::array();
  std::size_t suspicious = 0;
  for (const auto& p : parts) {
    list.push_back(to_json(p, cfg.density));
    suspicious += suspicious_components(p, cfg.density.tau).size();
  }
  rep["products"] = list;
  rep["suspicious_components"] = suspicious;
  run.write_json(std::string("detect_") + algorithm_name(cfg.algorithm) + ".json", rep);
  if (run.opt().export_graphs) {
    fs::create_directories(run.path("graphs"));
    for (const auto& p : products) {
      const auto g = detection_graph(corpus, p, cfg.density);
      auto edges = run.open("graphs/" + p + ".edges");
      write_edge_list(edges, g);
      auto labels = run.open("graphs/" + p + ".labels");
      write_node_labels(labels, build_account_graph(corpus, {g.nodes().begin(), g.nodes().end()}));
    }
  }
  run.log(std::to_string(products.size()) + " products, " + std::to_string(suspicious) + " suspicious components (" +
          algorithm_name(cfg.algorithm) + ")");
}

void cmd_embed(Run& run) {
  const auto& cfg = run.cfg();
  const auto corpus = run.corpus();
  WeightedGraph graph;
  if (!run.opt().products.empty()) {
    graph = build_union_graph(corpus, {run.opt().products.begin(), run.opt().products.end()});
  } else {
    const auto parts = run.opt().detect_report.empty() ? detect_all(corpus, run.products(corpus), cfg)
                                                       : read_detect_report(run.opt().detect_report);
    std::set<std::string> accounts;
    for (const auto& p : parts)
      for (const auto& c : suspicious_components(p, cfg.density.tau)) accounts.insert(c.accounts.begin(), c.accounts.end());
    if (accounts.empty()) throw DataError("no suspicious accounts to embed");
    graph = build_account_graph(corpus, accounts);
  }
  const auto emb = embed_graph(graph, cfg.walk);
  save_embedding(emb, run.path("embedding.bin").string(), run.path("embedding.nodes.txt").string());
  run.note_output("embedding.bin");
  run.note_output("embedding.nodes.txt");
  auto rep = run.report();
  rep["nodes"] = graph.node_count();
  rep["edges"] = graph.edge_count();
  rep["dims"] = emb.dims;
  rep["epoch_loss"] = emb.epoch_loss;
  rep["threads"] = cfg.walk.threads;
  rep["deterministic"] = cfg.walk.threads == 1;
  run.write_json("embed.json", rep);
  run.log("embedded " + std::to_string(graph.node_count()) + " nodes in " + std::to_string(emb.dims) + " dimensions");
}

void cmd_expand(Run& run) {
  const auto& cfg = run.cfg();
  const auto corpus = run.corpus(true);
  const fs::path dir = run.opt().embedding_dir.empty() ? run.path("") : fs::path(run.opt().embedding_dir);
  const auto emb = load_embedding((dir / "embedding.bin").string(), (dir / "embedding.nodes.txt").string());
  std::map<std::string, std::string> labels;
  std::set<std::string> unlabeled;
  for (const auto& n : emb.nodes) {
    if (auto w = corpus.worker_of(n))
      labels[n] = *w;
    else
      unlabeled.insert(n);
  }
  const auto expanded = guilt_by_association(emb, labels, unlabeled, cfg.gba);
  std::map<std::string, std::string> records;
  json list = json::array();
  for (const auto& [node, lab] : expanded) {
    records[node] = lab.worker_id;
    list.push_back({{"account_id", node}, {"worker_id", lab.worker_id}, {"score", lab.score}});
  }
  auto out = run.open("expanded_attributions.jsonl");
  write_attributions(out, records);
  auto rep = run.report();
  rep["labelled"] = labels.size();
  rep["queried"] = unlabeled.size();
  rep["expanded"] = expanded.size();
  rep["threshold"] = cfg.gba.threshold;
  rep["records"] = list;
  run.write_json("expand.json", rep);
  run.log("labelled " + std::to_string(expanded.size()) + " of " + std::to_string(unlabeled.size()) +
          " unlabelled accounts");
}

void cmd_train(Run& run) {
  const auto& cfg = run.cfg();
  const auto corpus = run.corpus(true);
  const auto grouping = group_instances(corpus, cfg.attribute.stylo.min_reviews);
  const auto model = train_attributor(grouping.instances, cfg.attribute);
  auto out = run.report();
  out["model"] = model.to_json();
  run.write_json("model.json", out);
  if (!run.opt().features_csv.empty()) {
    std::vector<FeatureVector> vectors;
    for (const auto& i : grouping.instances) vectors.push_back(extract_features(i, model.space));
    auto f = run.open(run.opt().features_csv);
    write_feature_csv(f, model.space, grouping.instances, vectors);
  }
  auto rep = run.report();
  json workers = json::object();
  for (const auto& w : model.workers)
    workers[w.worker_id] = {{"accounts", w.accounts.size()}, {"instances", w.instance_ids}};
  rep["instances"] = grouping.instances.size();
  rep["dropped_instances"] = grouping.dropped;
  rep["dimension"] = model.space.dimension();
  rep["classifier"] = model.classifier->name();
  rep["workers"] = workers;
  run.write_json("train.json", rep);
  run.log("trained " + model.classifier->name() + " on " + std::to_string(grouping.instances.size()) +
          " instances of " + std::to_string(model.workers.size()) + " workers");
}

json attribution_report(Run& run, const Corpus& corpus, const std::vector<Partition>& parts,
                        const AttributionModel& model) {
  const auto& cfg = run.cfg();
  std::vector<ProductAttribution> results(parts.size());
  parallel_for(parts.size(), cfg.threads, [&](std::size_t i) {
    results[i] = attribute_partition(corpus, parts[i], cfg.density, model, cfg.attribute);
  });
  auto rep = run.report();
  rep["algorithm"] = algorithm_name(cfg.algorithm);
  rep["abstain_threshold"] = cfg.attribute.abstain_threshold;
  json list = json::array();
  std::size_t attributed = 0, abstained = 0;
  for (const auto& r : results) {
    list.push_back(to_json(r, cfg.density));
    for (const auto& c : r.results) (c.attributed ? attributed : abstained) += 1;
  }
  rep["products"] = list;
  rep["attributed_components"] = attributed;
  rep["abstained_components"] = abstained;
  run.log(std::to_string(attributed) + " components attributed, " + std::to_string(abstained) + " abstained");
  return rep;
}

void cmd_attribute(Run& run) {
  if (run.opt().detect_report.empty()) throw ConfigError("attribute needs --detect <detect report>");
  const auto corpus = run.corpus();
  const auto model = read_model(run.opt().model.empty() ? run.path("model.json").string() : run.opt().model);
  run.write_json("attribute.json", attribution_report(run, corpus, read_detect_report(run.opt().detect_report), model));
}

void cmd_deanonymize(Run& run) {
  const auto corpus = run.corpus();
  const auto model = read_model(run.opt().model.empty() ? run.path("model.json").string() : run.opt().model);
  const auto parts = detect_all(corpus, run.products(corpus), run.cfg());
  run.write_json("deanonymize.json", attribution_report(run, corpus, parts, model));
}

void cmd_eval(Run& run) {
  const auto& cfg = run.cfg();
  if (run.opt().report.empty()) throw ConfigError("eval needs --report <attribute or deanonymize report>");
  if (cfg.groundtruth_path.empty()) throw ConfigError("eval needs --groundtruth");
  const auto gt = load_ground_truth(cfg.groundtruth_path);
  std::ifstream in(run.opt().report);
  if (!in) throw DataError("cannot open report " + run.opt().report);
  json report;
  try {
    report = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(run.opt().report + ": " + e.what());
  }
  std::vector<InstancePrediction> instances;
  std::vector<ProductPrediction> products;
  std::size_t fraud = 0, covered = 0, honest_components = 0;
  try {
    for (const auto& pj : report.at("products")) {
      const auto pid = pj.at("product_id").get<std::string>();
      auto it = gt.products.find(pid);
      if (it == gt.products.end()) continue;  // products outside the ground truth are not scored
      const auto& truth = it->second;
      auto part = partition_from_json(pj.at("partition"));
      part.components = suspicious_components(part, cfg.density.tau);
      if (truth.fraud()) {
        ++fraud;
        if (p_coverage(truth, part, cfg.coverage)) ++covered;
      }
      products.push_back({pid, pj.at("workers").get<std::set<std::string>>()});
      for (const auto& rj : pj.at("results")) {
        std::map<std::string, std::size_t> overlap;
        for (const auto& a : rj.at("accounts"))
          for (const auto& [w, accounts] : truth.workers)
            if (accounts.contains(a.get<std::string>())) ++overlap[w];
        if (overlap.empty()) {
          ++honest_components;
          continue;
        }
        auto best = std::max_element(overlap.begin(), overlap.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
        InstancePrediction ip{rj.at("component_id"), pid, best->first, {}, rj.at("abstained")};
        for (const auto& r : rj.at("ranked")) ip.ranked.push_back({r.at("worker_id"), r.at("probability")});
        instances.push_back(std::move(ip));
      }
    }
  } catch (const json::exception& e) {
    throw DataError(run.opt().report + ": " + e.what());
  }
  const auto ev = eval_attribution(instances, products, gt);
  auto rep = run.report();
  rep["attribution"] = to_json(ev);
  rep["coverage"] = {{"fraud_products", fraud},
                     {"covered_products", covered},
                     {"p1", cfg.coverage.p1},
                     {"p2", cfg.coverage.p2},
                     {"rate", fraud ? double(covered) / double(fraud) : 0.0}};
  rep["components_without_workers"] = honest_components;
  run.write_json("metrics.json", rep);

  std::ostringstream t;
  t << std::fixed << std::setprecision(3);
  t << "coverage (" << cfg.coverage.p1 << ", " << cfg.coverage.p2 << "): " << covered << "/" << fraud << "\n";
  t << "instances: " << ev.instances << "  top1 " << ev.top_k_accuracy(1) << "  top3 " << ev.top_k_accuracy(3)
    << "  top5 " << ev.top_k_accuracy(5) << "\n";
  t << "apps: " << ev.app_recall.apps << "  >=1 worker " << ev.app_recall.at_least_one << "  recall>=50% "
    << ev.app_recall.ge50 << "  >=70% " << ev.app_recall.ge70 << "  >=90% " << ev.app_recall.ge90 << "\n";
  t << std::left << std::setw(12) << "worker" << std::setw(10) << "precision" << "recall\n";
  for (const auto& [w, s] : ev.per_worker)
    t << std::left << std::setw(12) << w << std::setw(10) << s.precision() << s.recall() << "\n";
  if (!run.opt().quiet) std::cout << t.str();
}

void cmd_validate(Run& run) {
  const auto corpus = run.corpus();
  const auto products = run.products(corpus);
  auto rep = run.report();
  json list = json::array();
  std::size_t dup_total = 0, review_total = 0, repost_total = 0;
  for (const auto& p : products) {
    const auto groups = find_duplicates(corpus, p);
    const auto dups = duplicate_review_count(groups);
    const auto reviews = corpus.reviews_of_product(p).size();
    json entry = {{"product_id", p}, {"reviews", reviews}, {"duplicate_groups", groups}, {"duplicate_reviews", dups}};
    bool snapshots = reviews > 0;
    for (auto i : corpus.reviews_of_product(p)) snapshots = snapshots && corpus.reviews()[i].snapshot_id.has_value();
    if (snapshots) {
      const auto series = snapshot_series(corpus, p);
      json reposts = json::array();
      if (series.snapshots.size() >= 2)
        for (const auto& r : find_reposts(series, corpus)) {
          reposts.push_back({{"account_id", r.account_id}, {"repost_count", r.repost_count}});
          repost_total += r.repost_count;
        }
      entry["snapshots"] = series.snapshots.size();
      entry["reposts"] = reposts;
    } else {
      entry["snapshots"] = nullptr;
      entry["reposts"] = nullptr;
    }
    dup_total += dups;
    review_total += reviews;
    list.push_back(entry);
  }
  rep["products"] = list;
  rep["duplicate_reviews"] = dup_total;
  rep["reviews"] = review_total;
  rep["duplicate_ratio"] = review_total ? double(dup_total) / double(review_total) : 0.0;
  rep["reposts"] = repost_total;
  run.write_json("validate.json", rep);
  run.log(std::to_string(dup_total) + " duplicate reviews of " + std::to_string(review_total) + ", " +
          std::to_string(repost_total) + " re-posts");
}

void cmd_synth(Run& run) {
  const auto sc = generate(run.cfg().synth);
  write_corpus_files(run, sc.corpus);
  auto gt = run.open("groundtruth.jsonl");
  write_ground_truth(gt, sc.truth);
  auto rep = run.report();
  rep["log"] = sc.log;
  rep["products"] = sc.products().size();
  rep["fraud_products"] = sc.fraud_products().size();
  rep["reviews"] = sc.corpus.reviews().size();
  rep["accounts"] = sc.corpus.accounts().size();
  run.write_json("synth.json", rep);
  for (const auto& l : sc.log) run.log(l);
}

void cmd_benchmark(Run& run) {
  const auto& cfg = run.cfg();
  Scenario sc;
  if (!cfg.corpus_path.empty()) {
    if (cfg.groundtruth_path.empty()) throw ConfigError("benchmark on a corpus needs --groundtruth");
    sc.corpus = run.corpus(true);
    sc.truth = load_ground_truth(cfg.groundtruth_path);
    for (const auto& [p, t] : sc.truth.products)
      if (!sc.corpus.has_product(p)) throw DataError("ground truth product " + p + " not in corpus");
  } else {
    sc = generate(cfg.synth);
  }
  const auto rep = benchmark(sc, cfg.benchmark_config());
  auto out = run.report();
  out["scenario"] = {{"source", cfg.corpus_path.empty() ? "synth" : "corpus"}, {"log", sc.log}};
  out["results"] = to_json(rep);
  run.write_json("benchmark.json", out);

  std::ostringstream t;
  t << std::fixed << std::setprecision(3);
  for (const auto* d : {&rep.mcdense, &rep.dsg})
    t << std::left << std::setw(8) << algorithm_name(d->algorithm) << " covered " << d->covered << "/"
      << d->fraud_products << "  honest flagged " << d->flagged_honest << "/" << d->honest_products << "\n";
  t << "leave-one-out: " << rep.loo_eval.instances << " instances, top1 " << rep.loo_eval.top_k_accuracy(1)
    << ", top3 " << rep.loo_eval.top_k_accuracy(3) << "\n";
  const auto& app = rep.end_to_end_eval.app_recall;
  t << "end-to-end: " << app.apps << " fraud products, >=1 worker " << app.at_least_one << ", >=90% of workers "
    << app.ge90 << "\n";
  if (rep.gba) t << "guilt by association: macro F1 " << rep.gba->macro_f1 << "\n";
  if (!run.opt().quiet) std::cout << t.str();
}

int fail(Exit code, const std::string& type, const std::string& message, std::optional<std::size_t> line = {}) {
  json err = {{"type", type}, {"message", message}, {"exit_code", int(code)}};
  if (line) err["line"] = *line;
  std::cerr << json{{"error", err}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraudtrace: search rank fraud detection and worker attribution"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("-c,--config", opt.config_file, "key=value config file (default: $FRAUDTRACE_CONFIG)");
  app.add_option("--set", opt.sets, "override one setting, key=value (repeatable)");
  app.add_option("-o,--out", opt.out, "output directory (paths.output)");
  app.add_option("--seed", opt.seed, "run.seed");
  app.add_option("--threads", opt.threads, "worker threads for per-product work (run.threads)");
  app.add_flag("-q,--quiet", opt.quiet, "no summary on stdout");

  auto corpus_opts = [&](CLI::App* sub) {
    sub->add_option("--corpus", opt.corpus, "reviews.jsonl (paths.corpus)");
    sub->add_option("--attributions", opt.attributions, "attributions.jsonl (paths.attributions)");
  };
  auto product_opt = [&](CLI::App* sub) {
    sub->add_option("-p,--product", opt.products, "restrict to these products (repeatable)");
  };

  auto* ingest = app.add_subcommand("ingest", "validate and index a corpus");
  corpus_opts(ingest);
  auto* detect = app.add_subcommand("detect", "partition products into fraud components");
  corpus_opts(detect);
  product_opt(detect);
  detect->add_option("--algorithm", opt.algorithm, "mcdense or dsg (detect.algorithm)");
  detect->add_flag("--export-graphs", opt.export_graphs, "write each detection graph as an edge list");
  auto* embed = app.add_subcommand("embed", "random-walk embedding of the union fraud graph");
  corpus_opts(embed);
  product_opt(embed);
  embed->add_option("--detect", opt.detect_report, "take suspicious accounts from this detect report");
  embed->add_option("--algorithm", opt.algorithm, "detection algorithm when no report is given");
  auto* expand = app.add_subcommand("expand-labels", "label unattributed accounts by guilt by association");
  corpus_opts(expand);
  expand->add_option("--embedding", opt.embedding_dir, "directory holding embedding.bin (default: output dir)");
  auto* train = app.add_subcommand("train", "build the stylometric space and attribution model");
  corpus_opts(train);
  train->add_option("--features", opt.features_csv, "also write the training feature matrix to this CSV");
  auto* attribute = app.add_subcommand("attribute", "attribute the components of a detect report");
  corpus_opts(attribute);
  attribute->add_option("--detect", opt.detect_report, "detect report")->required();
  attribute->add_option("--model", opt.model, "model.json (default: output dir)");
  auto* deanon = app.add_subcommand("deanonymize", "detect and attribute in one pass");
  corpus_opts(deanon);
  product_opt(deanon);
  deanon->add_option("--model", opt.model, "model.json (default: output dir)");
  deanon->add_option("--algorithm", opt.algorithm, "mcdense or dsg (detect.algorithm)");
  auto* eval = app.add_subcommand("eval", "score an attribute/deanonymize report against ground truth");
  eval->add_option("--report", opt.report, "attribute or deanonymize report")->required();
  eval->add_option("--groundtruth", opt.groundtruth, "groundtruth.jsonl (paths.groundtruth)");
  auto* validate = app.add_subcommand("validate", "duplicate reviews and re-posts");
  corpus_opts(validate);
  product_opt(validate);
  auto* synth = app.add_subcommand("synth", "generate a scenario with planted workers");
  auto* bench = app.add_subcommand("benchmark", "full evaluation on a synthetic or labelled scenario");
  corpus_opts(bench);
  bench->add_option("--groundtruth", opt.groundtruth, "groundtruth.jsonl (paths.groundtruth)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  const auto* sub = app.get_subcommands().front();
  const std::map<std::string, void (*)(Run&)> commands = {
      {"ingest", cmd_ingest},     {"detect", cmd_detect},       {"embed", cmd_embed},
      {"expand-labels", cmd_expand}, {"train", cmd_train},      {"attribute", cmd_attribute},
      {"deanonymize", cmd_deanonymize}, {"eval", cmd_eval},     {"validate", cmd_validate},
      {"synth", cmd_synth},       {"benchmark", cmd_benchmark}};
  try {
    Run run(sub->get_name(), opt);
    commands.at(sub->get_name())(run);
    run.finish();
    return kOk;
  } catch (const ConfigError& e) {
    return fail(kUsage, "config", e.what());
  } catch (const ParseError& e) {
    return fail(kData, "parse", e.what(), e.line());
  } catch (const DataError& e) {
    return fail(kData, "data", e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(kData, "io", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
