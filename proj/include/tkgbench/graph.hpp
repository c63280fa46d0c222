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

#ifndef TKGBENCH_GRAPH_HPP
#define TKGBENCH_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "tkgbench/error.hpp"

namespace tkgbench {

using NodeId = std::uint32_t;
using RelationId = std::uint32_t;
using NodeTypeId = std::uint32_t;
/// Integer count of granularity units (years, days or seconds).
using Timestamp = std::int64_t;

/// One timestamped directed typed edge. Ordered by (timestamp, subject,
/// relation, object), the storage order of every graph.
struct Quadruple {
  NodeId subject = 0;
  RelationId relation = 0;
  NodeId object = 0;
  Timestamp timestamp = 0;

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
  friend auto operator<=>(const Quadruple& a, const Quadruple& b) {
    return std::tie(a.timestamp, a.subject, a.relation, a.object) <=>
           std::tie(b.timestamp, b.subject, b.relation, b.object);
  }
};

/// A quadruple with its timestamp dropped.
struct Triple {
  NodeId subject = 0;
  RelationId relation = 0;
  NodeId object = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline Triple triple_of(const Quadruple& q) {
  return {q.subject, q.relation, q.object};
}

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(t.subject) << 32) | t.object;
    h ^= static_cast<std::uint64_t>(t.relation) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

enum class Granularity { year, day, second };
enum class GraphKind { tkg, thg };

inline std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::year: return "year";
    case Granularity::day: return "day";
    case Granularity::second: return "second";
  }
  return "day";
}

inline Granularity parse_granularity(std::string_view s) {
  if (s == "year") return Granularity::year;
  if (s == "day") return Granularity::day;
  if (s == "second") return Granularity::second;
  throw ConfigError("unknown granularity '" + std::string(s) + "'");
}

inline std::string_view to_string(GraphKind k) {
  return k == GraphKind::tkg ? "tkg" : "thg";
}

inline GraphKind parse_graph_kind(std::string_view s) {
  if (s == "tkg" || s == "TKG") return GraphKind::tkg;
  if (s == "thg" || s == "THG") return GraphKind::thg;
  throw ConfigError("unknown graph kind '" + std::string(s) + "'");
}

/// Inclusive upper timestamps of the train and validation parts.
struct SplitBoundaries {
  Timestamp train_end = 0;
  Timestamp valid_end = 0;

  friend bool operator==(const SplitBoundaries&,
                         const SplitBoundaries&) = default;
};

class TemporalMultiGraph;
struct InverseAugmentation;
inline InverseAugmentation add_inverse_relations(const TemporalMultiGraph&);

/// Immutable, time-sorted set of quadruples over dense node and relation
/// ids. Exact duplicates are dropped at construction.
class TemporalMultiGraph {
 public:
  TemporalMultiGraph() = default;

  TemporalMultiGraph(std::vector<Quadruple> quads, std::size_t node_count,
                     std::size_t relation_count,
                     Granularity granularity = Granularity::day,
                     std::optional<std::vector<NodeTypeId>> node_types = {})
      : quads_(std::move(quads)),
        node_count_(node_count),
        relation_count_(relation_count),
        base_relation_count_(relation_count),
        granularity_(granularity),
        node_types_(std::move(node_types)) {
    std::sort(quads_.begin(), quads_.end());
    const auto before = quads_.size();
    quads_.erase(std::unique(quads_.begin(), quads_.end()), quads_.end());
    duplicates_removed_ = before - quads_.size();
    validate();
  }

  std::span<const Quadruple> quads() const { return quads_; }
  std::size_t size() const { return quads_.size(); }
  bool empty() const { return quads_.empty(); }
  const Quadruple& operator[](std::size_t i) const { return quads_[i]; }
  auto begin() const { return quads_.cbegin(); }
  auto end() const { return quads_.cend(); }

  std::size_t node_count() const { return node_count_; }
  std::size_t relation_count() const { return relation_count_; }
  /// Relation count before inverse augmentation.
  std::size_t base_relation_count() const { return base_relation_count_; }
  bool augmented() const { return augmented_; }
  Granularity granularity() const { return granularity_; }
  std::size_t duplicates_removed() const { return duplicates_removed_; }

  const std::optional<std::vector<NodeTypeId>>& node_types() const {
    return node_types_;
  }

  std::size_t node_type_count() const {
    if (!node_types_ || node_types_->empty()) return 0;
    return static_cast<std::size_t>(
               *std::max_element(node_types_->begin(), node_types_->end())) +
           1;
  }

  /// Earliest timestamp; 0 for an empty graph.
  Timestamp t_min() const { return empty() ? 0 : quads_.front().timestamp; }
  /// Latest timestamp; 0 for an empty graph.
  Timestamp t_max() const { return empty() ? 0 : quads_.back().timestamp; }

  bool contains(const Quadruple& q) const {
    return std::binary_search(quads_.begin(), quads_.end(), q);
  }

  /// Quadruples (s, r, *, t), ordered by object.
  std::span<const Quadruple> objects_at(NodeId s, RelationId r,
                                        Timestamp t) const {
    const Quadruple lo{s, r, 0, t};
    auto first = std::lower_bound(quads_.begin(), quads_.end(), lo);
    auto last = first;
    while (last != quads_.end() && last->timestamp == t &&
           last->subject == s && last->relation == r) {
      ++last;
    }
    return {first, last};
  }

  /// All quadruples at timestamp t.
  std::span<const Quadruple> at(Timestamp t) const {
    auto first = std::lower_bound(
        quads_.begin(), quads_.end(), t,
        [](const Quadruple& q, Timestamp v) { return q.timestamp < v; });
    auto last = std::upper_bound(
        first, quads_.end(), t,
        [](Timestamp v, const Quadruple& q) { return v < q.timestamp; });
    return {first, last};
  }

  /// Distinct timestamps carrying at least one edge, ascending.
  std::vector<Timestamp> timestamps() const {
    std::vector<Timestamp> out;
    for (const auto& q : quads_) {
      if (out.empty() || out.back() != q.timestamp) out.push_back(q.timestamp);
    }
    return out;
  }

  /// Quadruples with t_from <= t <= t_to; vocabularies unchanged.
  TemporalMultiGraph slice(Timestamp t_from, Timestamp t_to) const {
    if (t_from > t_to) {
      throw ConfigError("slice: t_from " + std::to_string(t_from) +
                        " > t_to " + std::to_string(t_to));
    }
    auto first = std::lower_bound(
        quads_.begin(), quads_.end(), t_from,
        [](const Quadruple& q, Timestamp v) { return q.timestamp < v; });
    auto last = std::upper_bound(
        first, quads_.end(), t_to,
        [](Timestamp v, const Quadruple& q) { return v < q.timestamp; });
    return with_quads(std::vector<Quadruple>(first, last));
  }

  /// A graph sharing this graph's vocabularies and flags over `quads`, which
  /// must already be strictly sorted.
  TemporalMultiGraph with_quads(std::vector<Quadruple> sorted_quads) const {
    TemporalMultiGraph g;
    g.quads_ = std::move(sorted_quads);
    g.node_count_ = node_count_;
    g.relation_count_ = relation_count_;
    g.base_relation_count_ = base_relation_count_;
    g.augmented_ = augmented_;
    g.granularity_ = granularity_;
    g.node_types_ = node_types_;
    g.validate();
    return g;
  }

  friend bool operator==(const TemporalMultiGraph& a,
                         const TemporalMultiGraph& b) {
    return a.quads_ == b.quads_ && a.node_count_ == b.node_count_ &&
           a.relation_count_ == b.relation_count_ &&
           a.base_relation_count_ == b.base_relation_count_ &&
           a.augmented_ == b.augmented_ &&
           a.granularity_ == b.granularity_ && a.node_types_ == b.node_types_;
  }

 private:
  friend struct InverseAugmentation;
  friend InverseAugmentation add_inverse_relations(const TemporalMultiGraph&);

  void validate() const {
    for (std::size_t i = 0; i < quads_.size(); ++i) {
      const auto& q = quads_[i];
      if (i > 0 && !(quads_[i - 1] < q)) {
        throw DataError("quadruples not strictly sorted at index " +
                        std::to_string(i));
      }
      if (q.subject >= node_count_ || q.object >= node_count_) {
        throw DataError("node id out of range at index " + std::to_string(i));
      }
      if (q.relation >= relation_count_) {
        throw DataError("relation id out of range at index " +
                        std::to_string(i));
      }
    }
    if (node_types_ && node_types_->size() != node_count_) {
      throw DataError("node type map covers " +
                      std::to_string(node_types_->size()) + " of " +
                      std::to_string(node_count_) + " nodes");
    }
  }

  std::vector<Quadruple> quads_;
  std::size_t node_count_ = 0;
  std::size_t relation_count_ = 0;
  std::size_t base_relation_count_ = 0;
  bool augmented_ = false;
  Granularity granularity_ = Granularity::day;
  std::optional<std::vector<NodeTypeId>> node_types_;
  std::size_t duplicates_removed_ = 0;
};

struct InverseAugmentation {
  TemporalMultiGraph graph;
  /// Inverse quadruples that coincided with an existing quadruple.
  std::size_t collisions = 0;
};

/// Adds (o, r + R, s, t) for every (s, r, o, t). A graph may be augmented
/// only once.
inline InverseAugmentation add_inverse_relations(
    const TemporalMultiGraph& graph) {
  if (graph.augmented()) {
    throw ProtocolError("graph already carries inverse relations");
  }
  const auto base = static_cast<RelationId>(graph.relation_count());
  std::vector<Quadruple> quads;
  quads.reserve(graph.size() * 2);
  for (const auto& q : graph) {
    quads.push_back(q);
    quads.push_back({q.object, q.relation + base, q.subject, q.timestamp});
  }
  std::sort(quads.begin(), quads.end());
  const auto before = quads.size();
  quads.erase(std::unique(quads.begin(), quads.end()), quads.end());

  InverseAugmentation out;
  out.collisions = before - quads.size();
  out.graph.quads_ = std::move(quads);
  out.graph.node_count_ = graph.node_count();
  out.graph.relation_count_ = graph.relation_count() * 2;
  out.graph.base_relation_count_ = graph.relation_count();
  out.graph.augmented_ = true;
  out.graph.granularity_ = graph.granularity();
  out.graph.node_types_ = graph.node_types();
  out.graph.validate();
  return out;
}

}  // namespace tkgbench

#endif  // TKGBENCH_GRAPH_HPP
