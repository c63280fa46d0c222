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

#ifndef TKGBENCH_EVAL_HPP
#define TKGBENCH_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tkgbench/dataset_io.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/graph.hpp"
#include "tkgbench/negsamp.hpp"
#include "tkgbench/parallel.hpp"
#include "tkgbench/query.hpp"

namespace tkgbench {

/// A link forecaster under evaluation.
///
/// The engine calls observe() once per timestamp, strictly ascending, with
/// that timestamp's ground truth (including inverse facts for TKGs).
/// Between observe() calls it may call score() concurrently from several
/// threads; score() must only depend on facts already observed.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string name() const = 0;

  virtual void observe(Timestamp t, std::span<const Quadruple> facts) = 0;

  /// Writes one score per candidate to `out` (higher is more plausible).
  virtual void score(const EvalQuery& query, std::span<const NodeId> candidates,
                     std::span<double> out) const = 0;

  /// Optional time-less companion facts; ignored by default.
  virtual void set_static_context(const TemporalMultiGraph& /*facts*/) {}
};

/// Twice the average rank of the entry at `truth_index`:
/// 2 + 2 * |higher| + |tied others|. Keeps ranks on an integer grid.
inline std::uint64_t doubled_rank(std::span<const double> scores, std::size_t truth_index) {
  const double truth = scores[truth_index];
  std::uint64_t higher = 0;
  std::uint64_t tied = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == truth_index) continue;
    if (scores[i] > truth) {
      ++higher;
    } else if (scores[i] == truth) {
      ++tied;
    }
  }
  return 2 + 2 * higher + tied;
}

/// Average of the optimistic and pessimistic rank of the truth.
inline double average_rank(std::span<const double> scores, std::size_t truth_index) {
  return static_cast<double>(doubled_rank(scores, truth_index)) / 2.0;
}

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

/// Histogram of doubled ranks. Aggregates are reduced in ascending rank
/// order, so they do not depend on the order queries were added.
class RankAccumulator {
 public:
  void add(std::uint64_t doubled) {
    ++histogram_[doubled];
    ++count_;
  }

  void merge(const RankAccumulator& other) {
    for (auto [k, c] : other.histogram_) histogram_[k] += c;
    count_ += other.count_;
  }

  std::uint64_t count() const { return count_; }

  double mrr() const {
    if (count_ == 0) return 0.0;
    CompensatedSum sum;
    for (auto [k, c] : histogram_) sum.add(static_cast<double>(c) * (2.0 / static_cast<double>(k)));
    return sum.value() / static_cast<double>(count_);
  }

  /// Share of queries with rank <= k (rank 10.5 misses hits@10).
  double hits(unsigned k) const {
    if (count_ == 0) return 0.0;
    std::uint64_t within = 0;
    for (auto [d, c] : histogram_) {
      if (d <= 2ULL * k) within += c;
    }
    return static_cast<double>(within) / static_cast<double>(count_);
  }

 private:
  std::map<std::uint64_t, std::uint64_t> histogram_;
  std::uint64_t count_ = 0;
};

/// Drops every candidate c != truth for which (s, r, c, t) is a fact of
/// `full_graph` at exactly the query timestamp.
inline std::vector<NodeId> time_aware_filter(std::span<const NodeId> candidates,
                                             const EvalQuery& query,
                                             const TemporalMultiGraph& full_graph) {
  const auto facts = full_graph.objects_at(query.source, query.relation, query.timestamp);
  std::vector<NodeId> out;
  out.reserve(candidates.size());
  for (auto c : candidates) {
    if (c != query.true_destination) {
      const bool conflict =
          std::ranges::binary_search(facts, c, std::less<>{}, &Quadruple::object);
      if (conflict) continue;
    }
    out.push_back(c);
  }
  return out;
}

enum class EvalSplit { validation, test };

inline std::string_view to_string(EvalSplit s) {
  return s == EvalSplit::validation ? "valid" : "test";
}

inline EvalSplit parse_eval_split(std::string_view s) {
  if (s == "valid" || s == "validation") return EvalSplit::validation;
  if (s == "test") return EvalSplit::test;
  throw ConfigError("unknown split '" + std::string(s) + "'");
}

/// A dataset prepared for evaluation: the full graph, its split boundaries,
/// and the filter universe (the full graph with inverse relations for TKGs).
class EvalContext {
 public:
  EvalContext(TemporalMultiGraph full, SplitBoundaries boundaries, GraphKind kind)
      : base_(std::move(full)), boundaries_(boundaries), kind_(kind) {
    apply_split(base_, boundaries_);  // validates the boundaries
    universe_ = kind_ == GraphKind::tkg ? add_inverse_relations(base_).graph : base_;
  }

  const TemporalMultiGraph& base() const { return base_; }
  const TemporalMultiGraph& universe() const { return universe_; }
  const SplitBoundaries& boundaries() const { return boundaries_; }
  GraphKind kind() const { return kind_; }

  /// The evaluated part, without inverse relations.
  TemporalMultiGraph target(EvalSplit split) const {
    return split == EvalSplit::validation
               ? base_.slice(boundaries_.train_end + 1, boundaries_.valid_end)
               : base_.slice(boundaries_.valid_end + 1, base_.t_max());
  }

  /// Last timestamp a scorer sees before the first query of `split`.
  Timestamp history_end(EvalSplit split) const {
    return split == EvalSplit::validation ? boundaries_.train_end : boundaries_.valid_end;
  }

  std::vector<EvalQuery> queries(EvalSplit split) const {
    return expand_queries(target(split), kind_);
  }

 private:
  TemporalMultiGraph base_;
  SplitBoundaries boundaries_;
  GraphKind kind_;
  TemporalMultiGraph universe_;
};

/// Feeds `graph`'s timestamps in [from, to] to the scorer in order.
inline void warm_up(Scorer& scorer, const TemporalMultiGraph& graph, Timestamp from,
                    Timestamp to) {
  if (graph.empty() || from > to) return;
  const auto part = graph.slice(from, to);
  for (auto t : part.timestamps()) scorer.observe(t, part.at(t));
}

struct BreakdownEntry {
  double mrr = 0;
  std::uint64_t queries = 0;
};

struct TimestepEntry {
  Timestamp timestamp = 0;
  double mrr = 0;
  std::uint64_t queries = 0;
};

struct TieStats {
  std::uint64_t queries_with_ties = 0;
  std::uint64_t tied_candidates = 0;
};

struct EvalResult {
  double mrr = 0;
  std::map<unsigned, double> hits;
  std::uint64_t queries = 0;
  std::map<RelationId, BreakdownEntry> per_relation;
  std::vector<TimestepEntry> per_timestep;
  TieStats ties;
  /// Per-query doubled ranks in query order, when requested.
  std::vector<std::uint64_t> doubled_ranks;
};

struct EvalOptions {
  std::vector<unsigned> ks{1, 3, 10};
  unsigned threads = 1;
  /// Feed the scorer everything up to the split's history end first.
  bool warm_up = true;
  bool record_ranks = false;
  const TemporalMultiGraph* static_context = nullptr;
  /// Also drop candidates that form a static companion fact.
  bool filter_with_static = false;
};

namespace detail {

struct QueryKey {
  NodeId source;
  RelationId relation;
  Timestamp timestamp;
  NodeId truth;
  friend bool operator==(const QueryKey&, const QueryKey&) = default;
};

struct QueryKeyHash {
  std::size_t operator()(const QueryKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.timestamp) * 0x9e3779b97f4a7c15ULL;
    h ^= (static_cast<std::uint64_t>(k.source) << 32 | k.truth) + 0x7f4a7c15 + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.relation) * 0xc2b2ae3d27d4eb4fULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace detail

/// Single-step evaluation: for each timestamp of `split`, ascending, rank
/// every query's truth against its filtered negatives, then feed the
/// timestamp's ground truth to the scorer.
inline EvalResult evaluate_single_step(Scorer& scorer, const EvalContext& ctx, EvalSplit split,
                                       const NegativeSampleSet& negatives,
                                       const EvalOptions& options = {}) {
  const auto& universe = ctx.universe();
  if (negatives.node_count != universe.node_count()) {
    throw ProtocolError("negative set covers " + std::to_string(negatives.node_count) +
                        " nodes, dataset has " + std::to_string(universe.node_count()));
  }
  const auto queries = ctx.queries(split);

  std::unordered_map<detail::QueryKey, std::size_t, detail::QueryKeyHash> index;
  index.reserve(negatives.records.size());
  for (std::size_t i = 0; i < negatives.records.size(); ++i) {
    const auto& q = negatives.records[i].query;
    index.emplace(detail::QueryKey{q.source, q.relation, q.timestamp, q.true_destination}, i);
  }
  std::vector<std::size_t> record_of(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    auto it = index.find({q.source, q.relation, q.timestamp, q.true_destination});
    if (it == index.end()) {
      throw ProtocolError("no negative record for query (" + std::to_string(q.source) + ", " +
                          std::to_string(q.relation) + ", ?, " + std::to_string(q.timestamp) +
                          ") -> " + std::to_string(q.true_destination));
    }
    record_of[i] = it->second;
  }

  if (options.static_context) scorer.set_static_context(*options.static_context);
  if (options.warm_up) warm_up(scorer, universe, universe.t_min(), ctx.history_end(split));

  RankAccumulator global;
  std::map<RelationId, RankAccumulator> by_relation;
  EvalResult result;
  if (options.record_ranks) result.doubled_ranks.reserve(queries.size());

  std::vector<std::uint64_t> ranks;
  std::vector<std::uint64_t> ties;
  std::size_t begin = 0;
  while (begin < queries.size()) {
    const Timestamp t = queries[begin].timestamp;
    std::size_t end = begin;
    while (end < queries.size() && queries[end].timestamp == t) ++end;
    const std::size_t n = end - begin;
    ranks.assign(n, 0);
    ties.assign(n, 0);

    parallel_for(n, options.threads, [&](std::size_t j) {
      const auto& query = queries[begin + j];
      auto list = time_aware_filter(negatives.candidates(record_of[begin + j]), query, universe);
      if (options.filter_with_static && options.static_context) {
        std::erase_if(list, [&](NodeId c) {
          return c != query.true_destination &&
                 options.static_context->contains(
                     {query.source, query.relation, c, kStaticTimestamp});
        });
      }
      list.erase(std::remove(list.begin(), list.end(), query.true_destination), list.end());
      list.push_back(query.true_destination);
      std::vector<double> scores(list.size(), 0.0);
      scorer.score(query, list, scores);
      const std::size_t truth = list.size() - 1;
      ranks[j] = doubled_rank(scores, truth);
      ties[j] = static_cast<std::uint64_t>(
          std::count(scores.begin(), scores.end() - 1, scores[truth]));
    });

    RankAccumulator step;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& query = queries[begin + j];
      global.add(ranks[j]);
      step.add(ranks[j]);
      by_relation[query.relation].add(ranks[j]);
      if (ties[j] > 0) {
        ++result.ties.queries_with_ties;
        result.ties.tied_candidates += ties[j];
      }
      if (options.record_ranks) result.doubled_ranks.push_back(ranks[j]);
    }
    result.per_timestep.push_back({t, step.mrr(), step.count()});

    scorer.observe(t, universe.at(t));
    begin = end;
  }

  result.queries = global.count();
  result.mrr = global.mrr();
  for (auto k : options.ks) result.hits[k] = global.hits(k);
  for (const auto& [r, acc] : by_relation) result.per_relation[r] = {acc.mrr(), acc.count()};
  return result;
}

/// MRR and query count per relation id (inverse relations keep their
/// augmented id). The count-weighted mean equals the global MRR.
inline const std::map<RelationId, BreakdownEntry>& per_relation_breakdown(
    const EvalResult& result) {
  return result.per_relation;
}

inline nlohmann::ordered_json to_json(const EvalResult& r) {
  nlohmann::ordered_json j;
  j["mrr"] = r.mrr;
  nlohmann::ordered_json hits;
  for (auto [k, v] : r.hits) hits["hits@" + std::to_string(k)] = v;
  j["hits"] = hits;
  j["queries"] = r.queries;
  j["ties"] = {{"queries_with_ties", r.ties.queries_with_ties},
               {"tied_candidates", r.ties.tied_candidates}};
  return j;
}

/// `relation<TAB>mrr<TAB>queries`, ascending relation id.
inline void write_relation_table(std::ostream& out, const EvalResult& r) {
  out << "relation\tmrr\tqueries\n";
  char buf[64];
  for (const auto& [rel, e] : r.per_relation) {
    std::snprintf(buf, sizeof buf, "%.17g", e.mrr);
    out << rel << '\t' << buf << '\t' << e.queries << '\n';
  }
}

/// `timestamp<TAB>mrr<TAB>queries`, ascending timestamp.
inline void write_timestep_table(std::ostream& out, const EvalResult& r) {
  out << "timestamp\tmrr\tqueries\n";
  char buf[64];
  for (const auto& e : r.per_timestep) {
    std::snprintf(buf, sizeof buf, "%.17g", e.mrr);
    out << e.timestamp << '\t' << buf << '\t' << e.queries << '\n';
  }
}

}  // namespace tkgbench

#endif  // TKGBENCH_EVAL_HPP
