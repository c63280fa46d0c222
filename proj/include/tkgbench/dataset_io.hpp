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

#ifndef TKGBENCH_DATASET_IO_HPP
#define TKGBENCH_DATASET_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tkgbench/config.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/graph.hpp"

namespace tkgbench {

/// Column layout of a delimited edge list. Column indices are zero-based.
struct EdgeListSchema {
  std::size_t timestamp_column = 0;
  std::size_t subject_column = 1;
  std::size_t relation_column = 2;
  std::size_t object_column = 3;
  bool header = true;
  char delimiter = ',';
  Granularity granularity = Granularity::day;
  std::optional<std::filesystem::path> node_types_path;
  std::optional<std::filesystem::path> node_vocab_path;
  std::optional<std::filesystem::path> relation_vocab_path;
  std::optional<std::filesystem::path> static_edges_path;

  std::size_t arity() const {
    return std::max({timestamp_column, subject_column, relation_column,
                     object_column}) +
           1;
  }

  void validate() const {
    const std::size_t cols[] = {timestamp_column, subject_column,
                                relation_column, object_column};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        if (cols[i] == cols[j]) {
          throw ConfigError("schema: column indices must be distinct");
        }
      }
    }
    if (delimiter == '\n' || delimiter == '\r' || delimiter == '\0') {
      throw ConfigError("schema: invalid delimiter");
    }
  }

  /// Reads `timestamp_column`, `subject_column`, ..., `header`, `delimiter`
  /// (a single character, or `tab`), `granularity` and optional sidecar
  /// paths. Relative paths resolve against `base_dir`.
  static EdgeListSchema from_config(const KeyValueConfig& cfg,
                                    const std::filesystem::path& base_dir = {}) {
    EdgeListSchema s;
    s.timestamp_column = cfg.get<std::size_t>("timestamp_column", 0);
    s.subject_column = cfg.get<std::size_t>("subject_column", 1);
    s.relation_column = cfg.get<std::size_t>("relation_column", 2);
    s.object_column = cfg.get<std::size_t>("object_column", 3);
    s.header = cfg.get<bool>("header", true);
    const auto delim = cfg.get<std::string>("delimiter", ",");
    if (delim == "tab" || delim == "\\t") {
      s.delimiter = '\t';
    } else if (delim.size() == 1) {
      s.delimiter = delim[0];
    } else {
      throw ConfigError("schema: delimiter must be a single byte");
    }
    s.granularity = parse_granularity(cfg.get<std::string>("granularity", "day"));
    auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
      auto v = cfg.find<std::string>(key);
      if (!v || v->empty()) return std::nullopt;
      std::filesystem::path p(*v);
      return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    };
    s.node_types_path = path_of("node_types");
    s.node_vocab_path = path_of("node_vocab");
    s.relation_vocab_path = path_of("relation_vocab");
    s.static_edges_path = path_of("static_edges");
    s.validate();
    return s;
  }
};

/// Where to get a dataset and how to evaluate on it.
struct DatasetManifest {
  std::string name;
  std::string url;
  std::string checksum;  // lowercase hex SHA-256
  Granularity granularity = Granularity::day;
  GraphKind kind = GraphKind::tkg;
  std::string strategy = "all";
  std::optional<std::uint64_t> q;

  void validate() const {
    if (name.empty()) throw ConfigError("manifest: name is required");
    if (!url.empty() && checksum.empty()) {
      throw ConfigError("manifest: checksum required for remote fetch");
    }
    if (strategy != "all" && (!q || *q < 1)) {
      throw ConfigError("manifest: q >= 1 required for 1-vs-q strategies");
    }
  }

  static DatasetManifest from_config(const KeyValueConfig& cfg) {
    DatasetManifest m;
    m.name = cfg.require("name");
    m.url = cfg.get<std::string>("url", "");
    m.checksum = cfg.get<std::string>("checksum", "");
    std::transform(m.checksum.begin(), m.checksum.end(), m.checksum.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    m.granularity = parse_granularity(cfg.get<std::string>("granularity", "day"));
    m.kind = parse_graph_kind(cfg.get<std::string>("kind", "tkg"));
    m.strategy = cfg.get<std::string>("strategy", "all");
    m.q = cfg.find<std::uint64_t>("q");
    m.validate();
    return m;
  }
};

/// Raw string identifiers by dense id. Dense ids follow the sorted order of
/// the raw ids (numeric when every raw id is an integer, lexicographic
/// otherwise), so the mapping depends only on the id set.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary from_raw(std::vector<std::string> raw) {
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    const bool numeric = std::all_of(raw.begin(), raw.end(), [](auto& s) {
      return parse_integer(s).has_value();
    });
    if (numeric) {
      std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        return *parse_integer(a) < *parse_integer(b);
      });
    }
    return from_ordered(std::move(raw));
  }

  /// Uses the given order as the dense id order.
  static Vocabulary from_ordered(std::vector<std::string> raw) {
    Vocabulary v;
    v.raw_ = std::move(raw);
    v.index_.reserve(v.raw_.size());
    for (std::size_t i = 0; i < v.raw_.size(); ++i) {
      if (!v.index_.emplace(v.raw_[i], static_cast<std::uint32_t>(i)).second) {
        throw DataError("vocabulary: duplicate raw id '" + v.raw_[i] + "'");
      }
    }
    return v;
  }

  std::size_t size() const { return raw_.size(); }
  const std::string& raw(std::uint32_t id) const { return raw_.at(id); }

  std::optional<std::uint32_t> find(std::string_view raw) const {
    auto it = index_.find(std::string(raw));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Two columns `raw<TAB>dense`, sorted by dense id.
  void write(std::ostream& out) const {
    for (std::size_t i = 0; i < raw_.size(); ++i) {
      out << raw_[i] << '\t' << i << '\n';
    }
  }

  static Vocabulary read(std::istream& in) {
    std::vector<std::pair<std::uint64_t, std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.rfind('\t');
      if (tab == std::string::npos) throw ParseError(line_no, "expected raw<TAB>dense");
      auto dense = parse_integer(std::string_view(line).substr(tab + 1));
      if (!dense || *dense < 0) throw ParseError(line_no, "bad dense id");
      rows.emplace_back(static_cast<std::uint64_t>(*dense), line.substr(0, tab));
    }
    std::sort(rows.begin(), rows.end());
    std::vector<std::string> raw;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].first != i) throw DataError("vocabulary: dense ids not contiguous");
      raw.push_back(std::move(rows[i].second));
    }
    return from_ordered(std::move(raw));
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.raw_ == b.raw_;
  }

  static std::optional<std::int64_t> parse_integer(std::string_view s) {
    std::int64_t v = 0;
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  }

 private:
  std::vector<std::string> raw_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct ParsedEdgeList {
  TemporalMultiGraph graph;
  Vocabulary nodes;
  Vocabulary relations;
  std::optional<Vocabulary> node_type_names;
  std::size_t rows = 0;
  std::size_t duplicates_removed = 0;
};

struct ParseOptions {
  /// Fixed vocabularies; raw ids outside them are data errors.
  const Vocabulary* nodes = nullptr;
  const Vocabulary* relations = nullptr;
  /// `raw_node<delim>raw_type` rows.
  std::istream* node_types = nullptr;
};

namespace detail {

inline void split_fields(std::string_view line, char delim,
                         std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

/// Reads `raw_node<delim>raw_type` rows into a per-dense-node type vector.
inline std::pair<std::vector<NodeTypeId>, Vocabulary> read_node_types(
    std::istream& in, const Vocabulary& nodes, char delim) {
  std::vector<std::pair<std::uint32_t, std::string>> rows;
  std::vector<std::string> type_names;
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty()) continue;
    split_fields(view, delim, fields);
    if (fields.size() < 2) throw ParseError(line_no, "node type row needs 2 columns");
    const auto raw_node = trim(fields[0]);
    const auto raw_type = trim(fields[1]);
    auto id = nodes.find(raw_node);
    if (!id) continue;  // header row, or a node without edges
    if (raw_type.empty()) throw ParseError(line_no, "missing node type");
    rows.emplace_back(*id, std::string(raw_type));
    type_names.emplace_back(raw_type);
  }
  auto types = Vocabulary::from_raw(std::move(type_names));
  std::vector<NodeTypeId> out(nodes.size(), std::numeric_limits<NodeTypeId>::max());
  for (auto& [node, type] : rows) {
    const auto t = *types.find(type);
    if (out[node] != std::numeric_limits<NodeTypeId>::max() && out[node] != t) {
      throw DataError("node '" + nodes.raw(node) + "' has two node types");
    }
    out[node] = t;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == std::numeric_limits<NodeTypeId>::max()) {
      throw DataError("node '" + nodes.raw(static_cast<std::uint32_t>(i)) +
                      "' has no node type");
    }
  }
  return {std::move(out), std::move(types)};
}

}  // namespace detail

/// Parses a delimited edge list into a graph with dense ids. Rows with a
/// missing endpoint, relation or timestamp are rejected with their line
/// number.
inline ParsedEdgeList parse_edgelist(std::istream& in, const EdgeListSchema& schema,
                                     const ParseOptions& options = {}) {
  schema.validate();
  struct RawRow {
    Timestamp t;
    std::string s, r, o;
    std::size_t line;
  };
  std::vector<RawRow> rows;
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  const std::size_t arity = schema.arity();
  bool skipped_header = !schema.header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    if (detail::trim(line).empty()) continue;
    detail::split_fields(line, schema.delimiter, fields);
    if (fields.size() < arity) {
      throw ParseError(line_no, "expected at least " + std::to_string(arity) +
                                    " columns, found " +
                                    std::to_string(fields.size()));
    }
    const auto ts = detail::trim(fields[schema.timestamp_column]);
    const auto s = detail::trim(fields[schema.subject_column]);
    const auto r = detail::trim(fields[schema.relation_column]);
    const auto o = detail::trim(fields[schema.object_column]);
    if (s.empty()) throw ParseError(line_no, "missing subject");
    if (o.empty()) throw ParseError(line_no, "missing object");
    if (r.empty()) throw ParseError(line_no, "missing relation");
    if (ts.empty()) throw ParseError(line_no, "missing timestamp");
    auto t = Vocabulary::parse_integer(ts);
    if (!t) throw ParseError(line_no, "timestamp '" + std::string(ts) + "' is not an integer");
    rows.push_back({*t, std::string(s), std::string(r), std::string(o), line_no});
  }

  ParsedEdgeList out;
  out.rows = rows.size();
  if (options.nodes) {
    out.nodes = *options.nodes;
  } else {
    std::vector<std::string> raw;
    raw.reserve(rows.size() * 2);
    for (const auto& row : rows) {
      raw.push_back(row.s);
      raw.push_back(row.o);
    }
    out.nodes = Vocabulary::from_raw(std::move(raw));
  }
  if (options.relations) {
    out.relations = *options.relations;
  } else {
    std::vector<std::string> raw;
    raw.reserve(rows.size());
    for (const auto& row : rows) raw.push_back(row.r);
    out.relations = Vocabulary::from_raw(std::move(raw));
  }

  auto lookup = [](const Vocabulary& v, const std::string& raw, std::size_t line,
                   const char* what) {
    auto id = v.find(raw);
    if (!id) throw ParseError(line, std::string("unknown ") + what + " '" + raw + "'");
    return *id;
  };
  std::vector<Quadruple> quads;
  quads.reserve(rows.size());
  for (const auto& row : rows) {
    quads.push_back({lookup(out.nodes, row.s, row.line, "node"),
                     lookup(out.relations, row.r, row.line, "relation"),
                     lookup(out.nodes, row.o, row.line, "node"), row.t});
  }
  rows.clear();

  std::optional<std::vector<NodeTypeId>> node_types;
  if (options.node_types) {
    auto [types, names] =
        detail::read_node_types(*options.node_types, out.nodes, schema.delimiter);
    node_types = std::move(types);
    out.node_type_names = std::move(names);
  }
  out.graph = TemporalMultiGraph(std::move(quads), out.nodes.size(),
                                 out.relations.size(), schema.granularity,
                                 std::move(node_types));
  out.duplicates_removed = out.graph.duplicates_removed();
  return out;
}

/// Resolves the schema's sidecar paths and parses `edges_path`.
inline ParsedEdgeList load_edgelist(const std::filesystem::path& edges_path,
                                    const EdgeListSchema& schema) {
  std::ifstream in(edges_path);
  if (!in) throw DataError("cannot open " + edges_path.string());
  std::optional<Vocabulary> nodes, relations;
  std::ifstream types_in;
  ParseOptions options;
  if (schema.node_vocab_path) {
    std::ifstream v(*schema.node_vocab_path);
    if (!v) throw DataError("cannot open " + schema.node_vocab_path->string());
    nodes = Vocabulary::read(v);
    options.nodes = &*nodes;
  }
  if (schema.relation_vocab_path) {
    std::ifstream v(*schema.relation_vocab_path);
    if (!v) throw DataError("cannot open " + schema.relation_vocab_path->string());
    relations = Vocabulary::read(v);
    options.relations = &*relations;
  }
  if (schema.node_types_path) {
    types_in.open(*schema.node_types_path);
    if (!types_in) throw DataError("cannot open " + schema.node_types_path->string());
    options.node_types = &types_in;
  }
  return parse_edgelist(in, schema, options);
}

/// Writes `timestamp,subject,relation,object` rows in storage order, using
/// raw ids when vocabularies are given.
inline void write_edgelist(std::ostream& out, const TemporalMultiGraph& graph,
                           const Vocabulary* nodes = nullptr,
                           const Vocabulary* relations = nullptr,
                           char delim = ',') {
  out << "timestamp" << delim << "subject" << delim << "relation" << delim
      << "object\n";
  for (const auto& q : graph) {
    out << q.timestamp << delim;
    if (nodes) out << nodes->raw(q.subject); else out << q.subject;
    out << delim;
    if (relations) out << relations->raw(q.relation); else out << q.relation;
    out << delim;
    if (nodes) out << nodes->raw(q.object); else out << q.object;
    out << '\n';
  }
}

/// Timestamp carried by every static companion edge.
inline constexpr Timestamp kStaticTimestamp = std::numeric_limits<Timestamp>::min();

/// Time-less companion facts (e.g. static relations shipped with some
/// knowledge graphs). Scorers may read them; they never enter splits or
/// metrics.
struct StaticContext {
  TemporalMultiGraph graph;  // all quadruples at kStaticTimestamp
  Vocabulary relations;
  std::size_t dropped_unknown_nodes = 0;
};

/// Parses subject/relation/object columns of a static edge file against the
/// temporal node vocabulary. Edges touching unknown nodes are dropped and
/// counted.
inline StaticContext parse_static_edges(std::istream& in, const EdgeListSchema& schema,
                                        const Vocabulary& nodes) {
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  const std::size_t arity =
      std::max({schema.subject_column, schema.relation_column, schema.object_column}) + 1;
  struct Row {
    std::uint32_t s, o;
    std::string r;
  };
  std::vector<Row> rows;
  std::vector<std::string> raw_relations;
  StaticContext out;
  bool skipped_header = !schema.header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    if (detail::trim(line).empty()) continue;
    detail::split_fields(detail::trim(line), schema.delimiter, fields);
    if (fields.size() < arity) throw ParseError(line_no, "static edge row too short");
    const auto s = detail::trim(fields[schema.subject_column]);
    const auto r = detail::trim(fields[schema.relation_column]);
    const auto o = detail::trim(fields[schema.object_column]);
    if (s.empty() || o.empty() || r.empty()) {
      throw ParseError(line_no, "static edge with missing field");
    }
    auto si = nodes.find(s);
    auto oi = nodes.find(o);
    if (!si || !oi) {
      ++out.dropped_unknown_nodes;
      continue;
    }
    rows.push_back({*si, *oi, std::string(r)});
    raw_relations.emplace_back(r);
  }
  out.relations = Vocabulary::from_raw(std::move(raw_relations));
  std::vector<Quadruple> quads;
  quads.reserve(rows.size());
  for (const auto& row : rows) {
    quads.push_back({row.s, *out.relations.find(row.r), row.o, kStaticTimestamp});
  }
  out.graph = TemporalMultiGraph(std::move(quads), nodes.size(), out.relations.size());
  return out;
}

struct ChronologicalSplit {
  TemporalMultiGraph train;
  TemporalMultiGraph valid;
  TemporalMultiGraph test;
  SplitBoundaries boundaries;
};

/// Cuts [t_min, train_end], (train_end, valid_end], (valid_end, t_max].
inline ChronologicalSplit apply_split(const TemporalMultiGraph& graph,
                                      const SplitBoundaries& b) {
  if (!(graph.t_min() <= b.train_end && b.train_end < b.valid_end &&
        b.valid_end < graph.t_max())) {
    throw SplitError("boundaries " + std::to_string(b.train_end) + "/" +
                     std::to_string(b.valid_end) + " outside graph time range");
  }
  ChronologicalSplit out;
  out.boundaries = b;
  out.train = graph.slice(graph.t_min(), b.train_end);
  out.valid = graph.slice(b.train_end + 1, b.valid_end);
  out.test = graph.slice(b.valid_end + 1, graph.t_max());
  if (out.valid.empty() || out.test.empty()) {
    throw SplitError("boundaries leave the validation or test part empty");
  }
  return out;
}

/// Chronological split by cumulative edge share. A boundary is the smallest
/// timestamp whose cumulative share reaches the target; its whole timestamp
/// goes to the earlier part.
inline ChronologicalSplit chronological_split(const TemporalMultiGraph& graph,
                                              double train_frac = 0.70,
                                              double valid_frac = 0.15) {
  if (!(train_frac > 0.0) || !(valid_frac > 0.0) || !(train_frac + valid_frac < 1.0)) {
    throw ConfigError("split fractions must be positive and sum to less than 1");
  }
  if (graph.empty()) throw SplitError("graph is empty");
  const auto ts = graph.timestamps();
  if (ts.size() < 3) {
    throw SplitError("need at least 3 distinct timestamps, found " +
                     std::to_string(ts.size()));
  }
  const long double n = static_cast<long double>(graph.size());
  const long double train_target = static_cast<long double>(train_frac) * n;
  const long double valid_target =
      (static_cast<long double>(train_frac) + static_cast<long double>(valid_frac)) * n;
  constexpr long double kSlack = 1e-9L;

  std::optional<Timestamp> train_end, valid_end;
  std::size_t cumulative = 0;
  std::size_t i = 0;
  for (const auto t : ts) {
    while (i < graph.size() && graph[i].timestamp == t) {
      ++cumulative;
      ++i;
    }
    const auto c = static_cast<long double>(cumulative);
    if (!train_end && c + kSlack >= train_target) train_end = t;
    if (!valid_end && c + kSlack >= valid_target) {
      valid_end = t;
      break;
    }
  }
  if (!train_end || !valid_end || *train_end == *valid_end) {
    throw SplitError("cumulative rule leaves the validation part empty");
  }
  if (*valid_end >= graph.t_max()) {
    throw SplitError("cumulative rule leaves the test part empty");
  }
  return apply_split(graph, {*train_end, *valid_end});
}

}  // namespace tkgbench

#endif  // TKGBENCH_DATASET_IO_HPP
