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

#ifndef TKGBENCH_SYNGEN_HPP
#define TKGBENCH_SYNGEN_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "tkgbench/config.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/eval.hpp"
#include "tkgbench/graph.hpp"
#include "tkgbench/negsamp.hpp"
#include "tkgbench/rng.hpp"

namespace tkgbench {

/// Synthetic temporal graph with tunable recurrence.
///
/// Every timestep aims at `edge_rate` active triples. Each triple active at
/// t - 1 fires again at t with probability `p_repeat`, unless it has already
/// fired `max_run` consecutive times (0: no cap). The remaining slots are
/// filled with fresh random triples that were not active at t - 1, so
/// consecutive repeats only come from re-firing.
struct SynthConfig {
  std::size_t nodes = 50;
  std::size_t relations = 4;
  std::size_t timesteps = 30;
  std::size_t node_types = 0;  // 0: TKG (untyped nodes)
  std::size_t edge_rate = 20;
  double p_repeat = 0.5;
  std::size_t max_run = 0;
  std::uint64_t seed = 0;
  Granularity granularity = Granularity::day;

  void validate() const {
    if (nodes < 1 || relations < 1 || timesteps < 1 || edge_rate < 1) {
      throw ConfigError("synth: counts must be >= 1");
    }
    if (!(p_repeat >= 0.0 && p_repeat <= 1.0)) throw ConfigError("synth: p_repeat must be in [0, 1]");
    if (node_types > nodes) throw ConfigError("synth: more node types than nodes");
  }

  GraphKind kind() const { return node_types == 0 ? GraphKind::tkg : GraphKind::thg; }

  static SynthConfig from_config(const KeyValueConfig& cfg) {
    SynthConfig c;
    c.nodes = cfg.get<std::size_t>("nodes", c.nodes);
    c.relations = cfg.get<std::size_t>("relations", c.relations);
    c.timesteps = cfg.get<std::size_t>("timesteps", c.timesteps);
    c.node_types = cfg.get<std::size_t>("node_types", c.node_types);
    c.edge_rate = cfg.get<std::size_t>("edge_rate", c.edge_rate);
    c.p_repeat = cfg.get<double>("p_repeat", c.p_repeat);
    c.max_run = cfg.get<std::size_t>("max_run", c.max_run);
    c.seed = cfg.get<std::uint64_t>("seed", c.seed);
    c.granularity = parse_granularity(cfg.get<std::string>("granularity", "day"));
    c.validate();
    return c;
  }
};

/// Node type of node v in THG mode.
inline NodeTypeId synth_node_type(const SynthConfig& c, NodeId v) {
  return static_cast<NodeTypeId>(v % c.node_types);
}

/// (subject type, object type) that relation r connects in THG mode.
inline std::pair<NodeTypeId, NodeTypeId> synth_relation_types(const SynthConfig& c, RelationId r) {
  return {static_cast<NodeTypeId>(r % c.node_types),
          static_cast<NodeTypeId>((r + 1) % c.node_types)};
}

inline TemporalMultiGraph generate(const SynthConfig& config) {
  config.validate();
  auto rng = keyed_stream(config.seed, 0);
  const bool typed = config.node_types > 0;
  std::vector<std::vector<NodeId>> members(typed ? config.node_types : 0);
  for (NodeId v = 0; v < config.nodes && typed; ++v) {
    members[synth_node_type(config, v)].push_back(v);
  }
  auto draw = [&]() -> Triple {
    const auto r = static_cast<RelationId>(rng.below(config.relations));
    if (!typed) {
      return {static_cast<NodeId>(rng.below(config.nodes)), r,
              static_cast<NodeId>(rng.below(config.nodes))};
    }
    const auto [st, ot] = synth_relation_types(config, r);
    return {members[st][rng.below(members[st].size())], r,
            members[ot][rng.below(members[ot].size())]};
  };

  std::vector<Quadruple> quads;
  std::map<Triple, std::size_t> previous;  // active at t - 1 -> run length
  for (std::size_t step = 0; step < config.timesteps; ++step) {
    const auto t = static_cast<Timestamp>(step);
    std::map<Triple, std::size_t> current;
    for (const auto& [triple, run] : previous) {
      if (config.max_run > 0 && run >= config.max_run) continue;
      if (rng.uniform() < config.p_repeat) current.emplace(triple, run + 1);
    }
    std::size_t attempts = 0;
    const std::size_t max_attempts = 100 * config.edge_rate;
    while (current.size() < config.edge_rate && attempts++ < max_attempts) {
      const auto triple = draw();
      if (previous.count(triple) || current.count(triple)) continue;
      current.emplace(triple, 1);
    }
    for (const auto& [triple, run] : current) {
      quads.push_back({triple.subject, triple.relation, triple.object, t});
    }
    previous = std::move(current);
  }

  std::optional<std::vector<NodeTypeId>> types;
  if (typed) {
    types.emplace(config.nodes);
    for (NodeId v = 0; v < config.nodes; ++v) (*types)[v] = synth_node_type(config, v);
  }
  return TemporalMultiGraph(std::move(quads), config.nodes, config.relations,
                            config.granularity, std::move(types));
}

/// Reference evaluator: naive filtering, ranking and aggregation written
/// independently of evaluate_single_step. O(|queries| * |V| log |E|).
/// Candidates come from `negatives` for 1-vs-q sets and from a full node
/// scan for 1-vs-all sets.
inline EvalResult brute_force_evaluate(Scorer& scorer, const TemporalMultiGraph& full_graph,
                                       const SplitBoundaries& boundaries, GraphKind kind,
                                       EvalSplit split, const NegativeSampleSet& negatives,
                                       const std::vector<unsigned>& ks = {1, 3, 10}) {
  using Fact = std::tuple<NodeId, RelationId, NodeId, Timestamp>;
  const auto R = static_cast<RelationId>(full_graph.relation_count());
  std::set<Fact> facts;
  std::map<Timestamp, std::vector<Quadruple>> by_time;
  for (const auto& q : full_graph) {
    facts.insert({q.subject, q.relation, q.object, q.timestamp});
    if (kind == GraphKind::tkg) facts.insert({q.object, q.relation + R, q.subject, q.timestamp});
  }
  for (const auto& [s, r, o, t] : facts) by_time[t].push_back({s, r, o, t});

  const Timestamp history_end =
      split == EvalSplit::validation ? boundaries.train_end : boundaries.valid_end;
  const Timestamp target_end =
      split == EvalSplit::validation ? boundaries.valid_end : full_graph.t_max();

  for (const auto& [t, quads] : by_time) {
    if (t <= history_end) scorer.observe(t, quads);
  }

  std::vector<std::uint64_t> doubled;
  for (const auto& [t, quads] : by_time) {
    if (t <= history_end || t > target_end) continue;
    std::vector<EvalQuery> queries;
    for (const auto& q : full_graph) {
      if (q.timestamp != t) continue;
      queries.push_back({q.subject, q.relation, t, q.object, Direction::tail});
      if (kind == GraphKind::tkg) {
        queries.push_back({q.object, q.relation + R, t, q.subject, Direction::head});
      }
    }
    for (const auto& query : queries) {
      const NegativeRecord* record = nullptr;
      for (const auto& rec : negatives.records) {
        if (rec.query.source == query.source && rec.query.relation == query.relation &&
            rec.query.timestamp == query.timestamp &&
            rec.query.true_destination == query.true_destination) {
          record = &rec;
          break;
        }
      }
      if (!record) throw ProtocolError("reference evaluator: missing negative record");

      std::vector<NodeId> pool;
      if (negatives.strategy == SamplingStrategy::all) {
        for (NodeId v = 0; v < full_graph.node_count(); ++v) pool.push_back(v);
      } else {
        pool = record->ids;
      }
      std::vector<NodeId> list;
      for (auto v : pool) {
        if (v == query.true_destination) continue;
        if (facts.count({query.source, query.relation, v, t})) continue;
        list.push_back(v);
      }
      list.push_back(query.true_destination);
      std::vector<double> scores(list.size());
      scorer.score(query, list, scores);
      const double truth = scores.back();
      double rank = 1.0;
      for (std::size_t i = 0; i + 1 < scores.size(); ++i) {
        if (scores[i] > truth) rank += 1.0;
        if (scores[i] == truth) rank += 0.5;
      }
      doubled.push_back(static_cast<std::uint64_t>(std::llround(rank * 2.0)));
    }
    scorer.observe(t, quads);
  }

  EvalResult out;
  out.queries = doubled.size();
  out.doubled_ranks = doubled;
  if (doubled.empty()) return out;
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto d : doubled) ++counts[d];
  // Ascending-rank Neumaier reduction of count * (1 / rank).
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& [d, c] : counts) {
    const double term = static_cast<double>(c) * (2.0 / static_cast<double>(d));
    const double next = sum + term;
    carry += std::fabs(sum) >= std::fabs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  out.mrr = (sum + carry) / static_cast<double>(doubled.size());
  for (auto k : ks) {
    std::size_t within = 0;
    for (auto d : doubled) within += d <= 2ULL * k ? 1 : 0;
    out.hits[k] = static_cast<double>(within) / static_cast<double>(doubled.size());
  }
  return out;
}

}  // namespace tkgbench

#endif  // TKGBENCH_SYNGEN_HPP
