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

#ifndef TKGBENCH_DATASET_STORE_HPP
#define TKGBENCH_DATASET_STORE_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "tkgbench/config.hpp"
#include "tkgbench/dataset_io.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/graph.hpp"

namespace tkgbench {

// An ingested dataset directory:
//   dataset.ini        name, kind, granularity, counts
//   edges.csv          canonical edge list over dense ids
//   nodes.tsv          node vocabulary (raw, dense)
//   relations.tsv      relation vocabulary (raw, dense)
//   node_types.tsv     optional, dense node id -> raw type name
//   static_edges.csv   optional static companion edges (dense ids)
//   static_relations.tsv
//   split.ini          optional split boundaries

struct Dataset {
  std::string name;
  GraphKind kind = GraphKind::tkg;
  TemporalMultiGraph graph;
  Vocabulary nodes;
  Vocabulary relations;
  std::optional<Vocabulary> node_type_names;
  std::optional<StaticContext> static_context;
  std::optional<SplitBoundaries> boundaries;
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  return in;
}

}  // namespace detail

inline void save_boundaries(const std::filesystem::path& dir, const SplitBoundaries& b) {
  KeyValueConfig cfg;
  cfg.set("train_end", b.train_end);
  cfg.set("valid_end", b.valid_end);
  cfg.save(dir / "split.ini");
}

inline std::optional<SplitBoundaries> load_boundaries(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "split.ini")) return std::nullopt;
  const auto cfg = KeyValueConfig::load(dir / "split.ini");
  return SplitBoundaries{cfg.require<Timestamp>("train_end"), cfg.require<Timestamp>("valid_end")};
}

inline void save_dataset(const std::filesystem::path& dir, const Dataset& ds) {
  std::filesystem::create_directories(dir);
  KeyValueConfig meta;
  meta.set("name", ds.name);
  meta.set("kind", std::string(to_string(ds.kind)));
  meta.set("granularity", std::string(to_string(ds.graph.granularity())));
  meta.set("quadruples", ds.graph.size());
  meta.set("node_count", ds.graph.node_count());
  meta.set("relation_count", ds.graph.relation_count());
  meta.save(dir / "dataset.ini");
  {
    auto out = detail::open_out(dir / "edges.csv");
    write_edgelist(out, ds.graph);
  }
  {
    auto out = detail::open_out(dir / "nodes.tsv");
    ds.nodes.write(out);
  }
  {
    auto out = detail::open_out(dir / "relations.tsv");
    ds.relations.write(out);
  }
  if (ds.graph.node_types()) {
    auto out = detail::open_out(dir / "node_types.tsv");
    const auto& types = *ds.graph.node_types();
    for (std::size_t v = 0; v < types.size(); ++v) {
      out << v << '\t';
      if (ds.node_type_names) out << ds.node_type_names->raw(types[v]); else out << types[v];
      out << '\n';
    }
  }
  if (ds.static_context) {
    auto out = detail::open_out(dir / "static_edges.csv");
    out << "subject,relation,object\n";
    for (const auto& q : ds.static_context->graph) {
      out << q.subject << ',' << q.relation << ',' << q.object << '\n';
    }
    auto rel = detail::open_out(dir / "static_relations.tsv");
    ds.static_context->relations.write(rel);
  }
  if (ds.boundaries) save_boundaries(dir, *ds.boundaries);
}

inline Dataset load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "dataset.ini")) {
    throw DataError(dir.string() + " is not a dataset directory (no dataset.ini)");
  }
  const auto meta = KeyValueConfig::load(dir / "dataset.ini");
  Dataset ds;
  ds.name = meta.require("name");
  ds.kind = parse_graph_kind(meta.require("kind"));
  {
    auto in = detail::open_in(dir / "nodes.tsv");
    ds.nodes = Vocabulary::read(in);
  }
  {
    auto in = detail::open_in(dir / "relations.tsv");
    ds.relations = Vocabulary::read(in);
  }
  EdgeListSchema schema;
  schema.granularity = parse_granularity(meta.require("granularity"));
  auto identity = [](std::size_t n) {
    std::vector<std::string> raw;
    for (std::size_t i = 0; i < n; ++i) raw.push_back(std::to_string(i));
    return Vocabulary::from_ordered(std::move(raw));
  };
  const auto node_ids = identity(ds.nodes.size());
  const auto relation_ids = identity(ds.relations.size());
  {
    auto in = detail::open_in(dir / "edges.csv");
    ds.graph = parse_edgelist(in, schema, {&node_ids, &relation_ids, nullptr}).graph;
  }
  if (std::filesystem::exists(dir / "node_types.tsv")) {
    auto in = detail::open_in(dir / "node_types.tsv");
    auto [types, names] = detail::read_node_types(in, node_ids, '\t');
    ds.graph = TemporalMultiGraph({ds.graph.begin(), ds.graph.end()}, ds.graph.node_count(),
                                  ds.graph.relation_count(), ds.graph.granularity(),
                                  std::move(types));
    ds.node_type_names = std::move(names);
  }
  if (std::filesystem::exists(dir / "static_edges.csv")) {
    StaticContext ctx;
    auto rel_in = detail::open_in(dir / "static_relations.tsv");
    ctx.relations = Vocabulary::read(rel_in);
    auto in = detail::open_in(dir / "static_edges.csv");
    EdgeListSchema s;
    s.subject_column = 0;
    s.relation_column = 1;
    s.object_column = 2;
    const auto static_relation_ids = identity(ctx.relations.size());
    // Stored ids are dense; identity vocabularies map them back.
    auto parsed = parse_static_edges(in, s, node_ids);
    std::vector<Quadruple> quads;
    for (const auto& q : parsed.graph) {
      const auto raw = parsed.relations.raw(q.relation);
      quads.push_back({q.subject, *static_relation_ids.find(raw), q.object, kStaticTimestamp});
    }
    ctx.graph = TemporalMultiGraph(std::move(quads), ds.nodes.size(), ctx.relations.size());
    ds.static_context = std::move(ctx);
  }
  ds.boundaries = load_boundaries(dir);
  return ds;
}

}  // namespace tkgbench

#endif  // TKGBENCH_DATASET_STORE_HPP
