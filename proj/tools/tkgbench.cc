/** Copyright 2026 The tkgbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// tkgbench: command-line driver for ingestion, splitting, statistics,
// negative sampling and single-step evaluation.
//
// Every subcommand writes its outputs plus manifest.json into --out-dir.
// `replay` re-runs a manifest and checks the outputs bit for bit.

#include <sys/resource.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tkgbench/baselines.hpp"
#include "tkgbench/checksum.hpp"
#include "tkgbench/config.hpp"
#include "tkgbench/dataset_io.hpp"
#include "tkgbench/dataset_store.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/eval.hpp"
#include "tkgbench/fetch.hpp"
#include "tkgbench/negsamp.hpp"
#include "tkgbench/stats.hpp"
#include "tkgbench/syngen.hpp"

#ifndef TKGBENCH_VERSION
#define TKGBENCH_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace tkgbench::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kData = 3,
  kProtocol = 4,
  kIntegrity = 5,
  kNetwork = 6,
  kMemory = 7,
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return kConfig;
    case ErrorKind::data: return kData;
    case ErrorKind::protocol: return kProtocol;
    case ErrorKind::integrity: return kIntegrity;
    case ErrorKind::network: return kNetwork;
  }
  return kInternal;
}

/// Files read and written by one run, for the manifest.
class Run {
 public:
  Run(std::string command, std::vector<std::string> args, fs::path out_dir)
      : command_(std::move(command)), args_(std::move(args)), out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  const fs::path& out_dir() const { return out_dir_; }
  fs::path output(const std::string& name) {
    outputs_.push_back(name);
    return out_dir_ / name;
  }
  void input(const fs::path& p) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        if (f.filename() != "manifest.json") inputs_[fs::absolute(f).string()] = sha256_file(f);
      }
    } else {
      inputs_[fs::absolute(p).string()] = sha256_file(p);
    }
  }
  void seed(const std::string& key, std::uint64_t value) { seeds_[key] = value; }

  void write_manifest(double seconds) const {
    json m;
    m["tool"] = "tkgbench";
    m["version"] = TKGBENCH_VERSION;
    m["command"] = command_;
    m["args"] = args_;
    m["cwd"] = fs::current_path().string();
    json inputs = json::object();
    for (const auto& [p, h] : inputs_) inputs[p] = h;
    m["inputs"] = inputs;
    json outputs = json::object();
    for (const auto& name : outputs_) outputs[name] = sha256_file(out_dir_ / name);
    m["outputs"] = outputs;
    m["seeds"] = seeds_;
    m["wall_clock_seconds"] = seconds;
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    m["peak_rss_kb"] = usage.ru_maxrss;
    std::ofstream out(out_dir_ / "manifest.json", std::ios::trunc);
    out << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  fs::path out_dir_;
  std::vector<std::string> outputs_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::uint64_t> seeds_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  out << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

fs::path cache_dir() {
  if (const char* env = std::getenv("TKGBENCH_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "tkgbench";
  }
  return fs::temp_directory_path() / "tkgbench-cache";
}

/// Split boundaries: explicit file, else the dataset's split.ini, else the
/// default chronological split.
SplitBoundaries resolve_boundaries(const Dataset& ds, const std::string& split_file, Run& run) {
  if (!split_file.empty()) {
    run.input(split_file);
    const auto cfg = KeyValueConfig::load(split_file);
    return {cfg.require<Timestamp>("train_end"), cfg.require<Timestamp>("valid_end")};
  }
  if (ds.boundaries) return *ds.boundaries;
  return chronological_split(ds.graph).boundaries;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

struct Options {
  std::string out_dir;
  std::string dataset;
  std::string schema;
  std::string split_file;
  std::string strategy = "all";
  std::optional<std::uint64_t> q;
  std::uint64_t seed = 0;
  std::string scorer = "edgebank-inf";
  std::string params;
  unsigned threads = 1;
  std::uint64_t mem_budget_mb = 0;

  // subcommand specific
  std::string manifest;
  std::string edgelist;
  std::string name;
  std::string kind;
  double train_frac = 0.70;
  double valid_frac = 0.15;
  std::size_t top_k = 10;
  std::size_t bins = kDefaultTimeBins;
  std::string part = "both";
  bool whole_type_universe = false;
  std::string negatives;
  std::string eval_split = "test";
  bool filter_static = false;
  std::string config;
  std::vector<std::string> results;
};

void cmd_fetch(const Options& o, Run& run) {
  run.input(o.manifest);
  const auto manifest = DatasetManifest::from_config(KeyValueConfig::load(o.manifest));
  const auto r = fetch_dataset(manifest, cache_dir());
  json j;
  j["name"] = manifest.name;
  j["url"] = manifest.url;
  j["sha256"] = manifest.checksum;
  j["path"] = r.path.string();
  write_json(run.output("fetch.json"), j);
  std::cerr << (r.from_cache ? "cached " : "downloaded ") << r.path.string() << " ("
            << r.bytes_downloaded << " bytes)\n";
}

void cmd_ingest(const Options& o, Run& run) {
  run.input(o.edgelist);
  EdgeListSchema schema;
  if (!o.schema.empty()) {
    run.input(o.schema);
    schema = EdgeListSchema::from_config(KeyValueConfig::load(o.schema),
                                         fs::path(o.schema).parent_path());
  }
  for (const auto& p : {schema.node_types_path, schema.node_vocab_path, schema.relation_vocab_path,
                        schema.static_edges_path}) {
    if (p) run.input(*p);
  }
  auto parsed = load_edgelist(o.edgelist, schema);
  Dataset ds;
  ds.name = o.name.empty() ? fs::path(o.edgelist).stem().string() : o.name;
  ds.kind = !o.kind.empty()             ? parse_graph_kind(o.kind)
            : parsed.graph.node_types() ? GraphKind::thg
                                        : GraphKind::tkg;
  if (ds.kind == GraphKind::thg && !parsed.graph.node_types()) {
    std::cerr << "warning: THG dataset without node types; node-type sampling unavailable\n";
  }
  ds.graph = std::move(parsed.graph);
  ds.nodes = std::move(parsed.nodes);
  ds.relations = std::move(parsed.relations);
  ds.node_type_names = std::move(parsed.node_type_names);
  std::size_t dropped_static = 0;
  if (schema.static_edges_path) {
    std::ifstream in(*schema.static_edges_path);
    if (!in) throw DataError("cannot open " + schema.static_edges_path->string());
    EdgeListSchema st = schema;
    st.subject_column = 0;
    st.relation_column = 1;
    st.object_column = 2;
    st.timestamp_column = 3;
    ds.static_context = parse_static_edges(in, st, ds.nodes);
    dropped_static = ds.static_context->dropped_unknown_nodes;
  }
  save_dataset(run.out_dir(), ds);
  for (const char* f : {"dataset.ini", "edges.csv", "nodes.tsv", "relations.tsv"}) run.output(f);
  if (ds.graph.node_types()) run.output("node_types.tsv");
  if (ds.static_context) {
    run.output("static_edges.csv");
    run.output("static_relations.tsv");
  }
  json j;
  j["name"] = ds.name;
  j["kind"] = std::string(to_string(ds.kind));
  j["rows"] = parsed.rows;
  j["duplicates_removed"] = parsed.duplicates_removed;
  j["quadruples"] = ds.graph.size();
  j["nodes"] = ds.graph.node_count();
  j["relations"] = ds.graph.relation_count();
  j["node_types"] = ds.graph.node_type_count();
  j["static_edges"] = ds.static_context ? ds.static_context->graph.size() : 0;
  j["static_edges_dropped"] = dropped_static;
  write_json(run.output("ingest.json"), j);
}

void cmd_split(const Options& o, Run& run) {
  run.input(o.dataset);
  const auto ds = load_dataset(o.dataset);
  const auto split = chronological_split(ds.graph, o.train_frac, o.valid_frac);
  save_boundaries(run.out_dir(), split.boundaries);
  run.output("split.ini");
  json j;
  j["train_end"] = split.boundaries.train_end;
  j["valid_end"] = split.boundaries.valid_end;
  auto part = [](const TemporalMultiGraph& g) {
    return json{{"edges", g.size()}, {"timesteps", g.timestamps().size()}};
  };
  j["train"] = part(split.train);
  j["valid"] = part(split.valid);
  j["test"] = part(split.test);
  write_json(run.output("split.json"), j);
}

void cmd_stats(const Options& o, Run& run) {
  run.input(o.dataset);
  const auto ds = load_dataset(o.dataset);
  const auto b = resolve_boundaries(ds, o.split_file, run);
  const auto split = apply_split(ds.graph, b);
  const auto report = compute_stats(ds.graph, split.train, split.test, o.top_k, o.bins);
  auto j = to_json(report);
  j["dataset"] = ds.name;
  j["train_end"] = b.train_end;
  j["valid_end"] = b.valid_end;
  write_json(run.output("stats.json"), j);

  std::string hist = "relation\tname\tcount\tshare\n";
  for (const auto& e : report.relation_histogram) {
    if (e.relation) {
      hist += std::to_string(*e.relation) + "\t" + ds.relations.raw(*e.relation);
    } else {
      hist += "others\tothers";
    }
    hist += "\t" + std::to_string(e.count) + "\t" + fmt(e.share) + "\n";
  }
  write_text(run.output("relation_histogram.tsv"), hist);
  std::string bins = "first\tlast\tmean\tmin\tmax\n";
  for (const auto& bin : report.edges_over_time) {
    bins += std::to_string(bin.first) + "\t" + std::to_string(bin.last) + "\t" + fmt(bin.mean) +
            "\t" + std::to_string(bin.min) + "\t" + std::to_string(bin.max) + "\n";
  }
  write_text(run.output("edges_over_time.tsv"), bins);
}

void cmd_negatives(const Options& o, Run& run) {
  run.input(o.dataset);
  const auto ds = load_dataset(o.dataset);
  const auto b = resolve_boundaries(ds, o.split_file, run);
  EvalContext ctx(ds.graph, b, ds.kind);
  SamplingOptions opts;
  opts.strategy = parse_sampling_strategy(o.strategy);
  opts.q = o.q;
  opts.seed = o.seed;
  opts.threads = o.threads;
  opts.whole_type_universe = o.whole_type_universe;
  run.seed("negatives", o.seed);
  if (opts.q && *opts.q >= ds.graph.node_count() && ds.graph.node_count() > 0) {
    std::cerr << "warning: q=" << *opts.q << " clamped to " << ds.graph.node_count() - 1 << "\n";
  }
  std::vector<EvalSplit> parts;
  if (o.part == "both" || o.part == "valid" || o.part == "validation") parts.push_back(EvalSplit::validation);
  if (o.part == "both" || o.part == "test") parts.push_back(EvalSplit::test);
  if (parts.empty()) throw ConfigError("--part must be valid, test or both");
  json j = json::object();
  for (auto part : parts) {
    opts.provenance = {ds.name, std::string(to_string(part)), std::string(kNegativeGeneratorVersion)};
    const auto queries = ctx.queries(part);
    const auto set = generate_negatives(ctx.universe(), queries, opts);
    const std::string file = "negatives_" + std::string(to_string(part)) + ".bin";
    write_negative_set(set, run.output(file));
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < set.records.size(); ++i) {
      total += set.stores_exclusions() ? set.node_count - 1 - set.records[i].ids.size()
                                       : set.records[i].ids.size();
    }
    j[std::string(to_string(part))] = {{"file", file},
                                       {"queries", set.records.size()},
                                       {"candidates", total}};
  }
  j["strategy"] = std::string(to_string(opts.strategy));
  if (o.q) j["q"] = *o.q;
  j["seed"] = o.seed;
  write_json(run.output("negatives.json"), j);
}

fs::path negatives_file(const std::string& arg, EvalSplit part) {
  const fs::path p(arg);
  if (fs::is_directory(p)) return p / ("negatives_" + std::string(to_string(part)) + ".bin");
  return p;
}

void cmd_eval(const Options& o, Run& run) {
  run.input(o.dataset);
  const auto ds = load_dataset(o.dataset);
  const auto b = resolve_boundaries(ds, o.split_file, run);
  EvalContext ctx(ds.graph, b, ds.kind);
  const auto part = parse_eval_split(o.eval_split);
  if (o.negatives.empty()) throw ConfigError("--negatives is required");
  const auto neg_path = negatives_file(o.negatives, part);
  run.input(neg_path);
  const auto negs = read_negative_set(neg_path);

  KeyValueConfig params;
  if (!o.params.empty()) {
    run.input(o.params);
    params = KeyValueConfig::load(o.params);
  }
  EvalOptions opts;
  opts.threads = o.threads;
  opts.record_ranks = false;
  if (ds.static_context) opts.static_context = &ds.static_context->graph;
  opts.filter_with_static = o.filter_static;

  json extra = json::object();
  std::unique_ptr<Scorer> scorer;
  if (o.scorer == "oracle") {
    scorer = std::make_unique<OracleScorer>();
  } else if (o.scorer == "constant") {
    scorer = std::make_unique<ConstantScorer>();
  } else if (o.scorer == "edgebank-inf" || o.scorer == "edgebank-tw") {
    EdgeBankConfig c;
    const auto key = params.get<std::string>("key", "pair");
    if (key != "pair" && key != "triple") throw ConfigError("edgebank key must be pair or triple");
    c.key = key == "triple" ? EdgeBankKey::triple : EdgeBankKey::pair;
    if (o.scorer == "edgebank-tw") {
      c.window = params.get<Timestamp>("window", default_edgebank_window(b));
      extra["window"] = *c.window;
    }
    extra["key"] = key;
    scorer = std::make_unique<EdgeBankScorer>(c);
  } else if (o.scorer == "recb-default") {
    RecurrencyParams p;
    p.lambda = params.get<double>("lambda", p.lambda);
    p.alpha = params.get<double>("alpha", p.alpha);
    p.window = params.get<Timestamp>("window", p.window);
    extra["params"] = to_json(p);
    scorer = std::make_unique<RecurrencyScorer>(p);
  } else if (o.scorer == "recb-train") {
    RecurrencyGrid grid;
    if (params.has("lambdas")) grid.lambdas = params.list<double>("lambdas");
    if (params.has("alphas")) grid.alphas = params.list<double>("alphas");
    if (params.has("windows")) grid.windows = params.list<Timestamp>("windows");
    const auto valid_path = negatives_file(o.negatives, EvalSplit::validation);
    if (valid_path == neg_path && part != EvalSplit::validation) {
      throw ConfigError("recb-train needs validation negatives: pass the negatives directory");
    }
    run.input(valid_path);
    const auto valid = read_negative_set(valid_path);
    const auto search = grid_search_recurrency(ctx, valid, grid, opts);
    std::string table = "lambda\talpha\twindow\tvalid_mrr\n";
    for (const auto& t : search.trials) {
      table += fmt(t.params.lambda) + "\t" + fmt(t.params.alpha) + "\t" +
               std::to_string(t.params.window) + "\t" + fmt(t.mrr) + "\n";
    }
    write_text(run.output("grid.tsv"), table);
    extra["params"] = to_json(search.best);
    extra["valid_mrr"] = search.best_mrr;
    scorer = std::make_unique<RecurrencyScorer>(search.best);
  } else {
    throw ConfigError("unknown scorer '" + o.scorer + "'");
  }

  const auto result = evaluate_single_step(*scorer, ctx, part, negs, opts);
  json j;
  j["dataset"] = ds.name;
  j["scorer"] = o.scorer;
  j["split"] = std::string(to_string(part));
  j["strategy"] = std::string(to_string(negs.strategy));
  if (negs.q) j["q"] = *negs.q;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  const auto metrics = to_json(result);
  for (const auto& [k, v] : metrics.items()) j[k] = v;
  j["manifest"] = "manifest.json";
  write_json(run.output("eval.json"), j);
  std::ostringstream rel, ts;
  write_relation_table(rel, result);
  write_timestep_table(ts, result);
  write_text(run.output("per_relation.tsv"), rel.str());
  write_text(run.output("per_timestep.tsv"), ts.str());
  std::cout << o.scorer << " " << to_string(part) << " mrr=" << fmt(result.mrr) << "\n";
}

void cmd_synth(const Options& o, Run& run) {
  run.input(o.config);
  const auto config = SynthConfig::from_config(KeyValueConfig::load(o.config));
  run.seed("synth", config.seed);
  Dataset ds;
  ds.name = o.name.empty() ? "synthetic" : o.name;
  ds.kind = config.kind();
  ds.graph = generate(config);
  std::vector<std::string> nodes, relations;
  for (std::size_t i = 0; i < config.nodes; ++i) nodes.push_back(std::to_string(i));
  for (std::size_t i = 0; i < config.relations; ++i) relations.push_back(std::to_string(i));
  ds.nodes = Vocabulary::from_ordered(nodes);
  ds.relations = Vocabulary::from_ordered(relations);
  save_dataset(run.out_dir(), ds);
  for (const char* f : {"dataset.ini", "edges.csv", "nodes.tsv", "relations.tsv"}) run.output(f);
  if (ds.graph.node_types()) run.output("node_types.tsv");
}

void cmd_report(const Options& o, Run& run) {
  if (o.results.empty()) throw ConfigError("report needs at least one result directory");
  std::string table = "run\tdataset\tscorer\tsplit\tstrategy\tmrr\thits@1\thits@3\thits@10\tqueries\n";
  for (const auto& dir : o.results) {
    const auto file = fs::path(dir) / "eval.json";
    if (!fs::exists(file)) throw DataError(file.string() + " not found");
    run.input(file);
    std::ifstream in(file);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(file.string() + ": " + e.what());
    }
    auto hit = [&](const char* k) {
      return j["hits"].contains(k) ? fmt(j["hits"][k].get<double>()) : std::string("-");
    };
    table += fs::path(dir).filename().string() + "\t" + j.value("dataset", "") + "\t" +
             j.value("scorer", "") + "\t" + j.value("split", "") + "\t" +
             j.value("strategy", "") + "\t" + fmt(j["mrr"].get<double>()) + "\t" +
             hit("hits@1") + "\t" + hit("hits@3") + "\t" + hit("hits@10") + "\t" +
             std::to_string(j["queries"].get<std::uint64_t>()) + "\n";
  }
  write_text(run.output("report.tsv"), table);
}

int run_args(std::vector<std::string> args);

int cmd_replay(const Options& o) {
  std::ifstream in(o.manifest);
  if (!in) throw ConfigError("cannot open manifest " + o.manifest);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("bad manifest: " + std::string(e.what()));
  }
  for (const auto& [path, hash] : m["inputs"].items()) {
    if (!fs::exists(path)) throw DataError("replay input missing: " + path);
    if (sha256_file(path) != hash.get<std::string>()) {
      throw IntegrityError("replay input changed since the run: " + path);
    }
  }
  if (o.out_dir.empty()) throw ConfigError("replay needs --out-dir");
  const auto out = fs::absolute(o.out_dir);
  std::vector<std::string> args = m["args"].get<std::vector<std::string>>();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out-dir" && i + 1 < args.size()) {
      args[i + 1] = out.string();
    } else if (args[i].rfind("--out-dir=", 0) == 0) {
      args[i] = "--out-dir=" + out.string();
    }
  }
  const auto cwd = fs::current_path();
  fs::current_path(m["cwd"].get<std::string>());
  const int rc = run_args(args);
  fs::current_path(cwd);
  if (rc != kOk) return rc;
  std::size_t mismatches = 0;
  for (const auto& [name, hash] : m["outputs"].items()) {
    const auto p = out / name;
    if (!fs::exists(p) || sha256_file(p) != hash.get<std::string>()) {
      std::cerr << "replay mismatch: " << name << "\n";
      ++mismatches;
    }
  }
  if (mismatches) throw IntegrityError(std::to_string(mismatches) + " output(s) differ");
  std::cout << "replay ok: " << m["outputs"].size() << " output(s) identical\n";
  return kOk;
}

void apply_memory_budget(std::uint64_t mb) {
  if (mb == 0) return;
  rlimit limit{};
  limit.rlim_cur = limit.rlim_max = static_cast<rlim_t>(mb) * 1024 * 1024;
  if (setrlimit(RLIMIT_AS, &limit) != 0) throw ConfigError("cannot apply --mem-budget");
}

int run_args(std::vector<std::string> args) {
  Options o;
  CLI::App app{"tkgbench: temporal graph forecasting benchmark pipeline", "tkgbench"};
  app.set_version_flag("--version", std::string(TKGBENCH_VERSION));
  app.require_subcommand(1);
  if (const char* env = std::getenv("TKGBENCH_MEM_BUDGET")) {
    o.mem_budget_mb = std::strtoull(env, nullptr, 10);
  }

  auto common = [&](CLI::App* sub, bool needs_out = true) {
    auto* out = sub->add_option("--out-dir", o.out_dir, "Run directory for outputs and manifest");
    if (needs_out) out->required();
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--mem-budget", o.mem_budget_mb, "Address-space cap in MiB (0: none)");
  };
  auto with_dataset = [&](CLI::App* sub) {
    sub->add_option("--dataset", o.dataset, "Ingested dataset directory")->required();
    sub->add_option("--split", o.split_file, "split.ini with train_end / valid_end");
  };

  auto* fetch = app.add_subcommand("fetch", "Download and verify a dataset manifest");
  fetch->add_option("--manifest", o.manifest, "Dataset manifest (INI)")->required();
  common(fetch);

  auto* ingest = app.add_subcommand("ingest", "Parse an edge list into a dataset directory");
  ingest->add_option("--edgelist", o.edgelist, "Delimited edge list")->required();
  ingest->add_option("--schema", o.schema, "Edge-list schema (INI)");
  ingest->add_option("--name", o.name, "Dataset name");
  ingest->add_option("--kind", o.kind, "tkg or thg");
  common(ingest);

  auto* split = app.add_subcommand("split", "Chronological train/valid/test boundaries");
  split->add_option("--dataset", o.dataset, "Ingested dataset directory")->required();
  split->add_option("--train-frac", o.train_frac);
  split->add_option("--valid-frac", o.valid_frac);
  common(split);

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  with_dataset(stats);
  stats->add_option("--top-k", o.top_k, "Relations listed before 'others'");
  stats->add_option("--bins", o.bins, "Bins for edges over time");
  common(stats);

  auto* negatives = app.add_subcommand("negatives", "Pre-generate evaluation negatives");
  with_dataset(negatives);
  negatives->add_option("--strategy", o.strategy, "all, type-aware, node-type or random");
  negatives->add_option("--q", o.q, "Negatives per query for 1-vs-q strategies");
  negatives->add_option("--seed", o.seed);
  negatives->add_option("--part", o.part, "valid, test or both");
  negatives->add_flag("--whole-type-universe", o.whole_type_universe,
                      "node-type: emit every same-type node instead of q");
  common(negatives);

  auto* eval = app.add_subcommand("eval", "Single-step evaluation of a scorer");
  with_dataset(eval);
  eval->add_option("--negatives", o.negatives, "negatives directory or .bin file")->required();
  eval->add_option("--scorer", o.scorer,
                   "oracle, constant, edgebank-inf, edgebank-tw, recb-default, recb-train");
  eval->add_option("--params", o.params, "Scorer parameters (INI)");
  eval->add_option("--eval-split", o.eval_split, "valid or test");
  eval->add_option("--seed", o.seed, "Unused by built-in scorers; recorded in the manifest");
  eval->add_flag("--filter-static", o.filter_static, "Also filter static companion facts");
  common(eval);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset directory");
  synth->add_option("--config", o.config, "Synthetic generator config (INI)")->required();
  synth->add_option("--name", o.name, "Dataset name");
  common(synth);

  auto* report = app.add_subcommand("report", "Tabulate eval.json files");
  report->add_option("--results", o.results, "Run directories")->required();
  common(report);

  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
  replay->add_option("--manifest", o.manifest, "manifest.json of an earlier run")->required();
  common(replay);

  const auto recorded = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    apply_memory_budget(o.mem_budget_mb);
    if (replay->parsed()) return cmd_replay(o);

    auto* sub = app.get_subcommands().front();
    const auto start = std::chrono::steady_clock::now();
    Run run(sub->get_name(), recorded, o.out_dir);
    if (sub == fetch) cmd_fetch(o, run);
    if (sub == ingest) cmd_ingest(o, run);
    if (sub == split) cmd_split(o, run);
    if (sub == stats) cmd_stats(o, run);
    if (sub == negatives) cmd_negatives(o, run);
    if (sub == eval) cmd_eval(o, run);
    if (sub == synth) cmd_synth(o, run);
    if (sub == report) cmd_report(o, run);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    run.write_manifest(took.count());
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: memory budget exhausted\n";
    return kMemory;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace tkgbench::cli

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return tkgbench::cli::run_args(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return tkgbench::cli::kInternal;
  }
}
