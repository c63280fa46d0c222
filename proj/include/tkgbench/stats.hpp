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

#ifndef TKGBENCH_STATS_HPP
#define TKGBENCH_STATS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/graph.hpp"

namespace tkgbench {

/// Share of test quadruples (s,r,o,t) for which (s,r,o,k) with k < t exists
/// anywhere in `full_graph`.
inline double recurrency_degree(const TemporalMultiGraph& full_graph,
                                const TemporalMultiGraph& test) {
  if (test.empty()) throw DataError("recurrency degree of an empty test set is undefined");
  std::unordered_map<Triple, Timestamp, TripleHash> first_seen;
  first_seen.reserve(full_graph.size());
  // Storage order is time-ascending, so the first insert wins.
  for (const auto& q : full_graph) first_seen.emplace(triple_of(q), q.timestamp);
  std::size_t hits = 0;
  for (const auto& q : test) {
    auto it = first_seen.find(triple_of(q));
    if (it != first_seen.end() && it->second < q.timestamp) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

/// Share of test quadruples (s,r,o,t) with (s,r,o,t-1) in `full_graph`.
inline double direct_recurrency_degree(const TemporalMultiGraph& full_graph,
                                       const TemporalMultiGraph& test) {
  if (test.empty()) {
    throw DataError("direct recurrency degree of an empty test set is undefined");
  }
  std::size_t hits = 0;
  for (const auto& q : test) {
    if (full_graph.contains({q.subject, q.relation, q.object, q.timestamp - 1})) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

/// Mean over distinct triples of the longest run of consecutive timestamps
/// at which the triple holds.
inline double consecutiveness(const TemporalMultiGraph& graph) {
  if (graph.empty()) throw DataError("consecutiveness of an empty graph is undefined");
  std::vector<Quadruple> by_triple(graph.begin(), graph.end());
  std::sort(by_triple.begin(), by_triple.end(), [](const auto& a, const auto& b) {
    return std::tie(a.subject, a.relation, a.object, a.timestamp) <
           std::tie(b.subject, b.relation, b.object, b.timestamp);
  });
  std::size_t triples = 0;
  std::size_t total = 0;
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < by_triple.size(); ++i) {
    const auto& q = by_triple[i];
    const bool same = i > 0 && triple_of(by_triple[i - 1]) == triple_of(q);
    if (!same) {
      if (i > 0) total += best;
      ++triples;
      best = run = 1;
      continue;
    }
    run = by_triple[i - 1].timestamp + 1 == q.timestamp ? run + 1 : 1;
    best = std::max(best, run);
  }
  total += best;
  return static_cast<double>(total) / static_cast<double>(triples);
}

/// Share of test nodes never seen in `train`.
inline double inductive_node_proportion(const TemporalMultiGraph& train,
                                        const TemporalMultiGraph& test) {
  if (test.empty()) throw DataError("inductive proportion of an empty test set is undefined");
  std::unordered_set<NodeId> seen;
  for (const auto& q : train) {
    seen.insert(q.subject);
    seen.insert(q.object);
  }
  std::unordered_set<NodeId> test_nodes;
  for (const auto& q : test) {
    test_nodes.insert(q.subject);
    test_nodes.insert(q.object);
  }
  std::size_t fresh = 0;
  for (auto n : test_nodes) fresh += seen.count(n) == 0;
  return static_cast<double>(fresh) / static_cast<double>(test_nodes.size());
}

struct Density {
  double edges_per_timestep = 0;
  double nodes_per_timestep = 0;
  Timestamp span = 0;  // t_max - t_min + 1
};

/// Edges and active nodes (union of endpoints) per timestep, averaged over
/// the full span including empty timesteps.
inline Density density_per_timestep(const TemporalMultiGraph& graph) {
  if (graph.empty()) throw DataError("density of an empty graph is undefined");
  Density d;
  d.span = graph.t_max() - graph.t_min() + 1;
  std::size_t node_total = 0;
  std::vector<NodeId> active;
  for (auto t : graph.timestamps()) {
    active.clear();
    for (const auto& q : graph.at(t)) {
      active.push_back(q.subject);
      active.push_back(q.object);
    }
    std::sort(active.begin(), active.end());
    node_total += static_cast<std::size_t>(
        std::unique(active.begin(), active.end()) - active.begin());
  }
  d.edges_per_timestep = static_cast<double>(graph.size()) / static_cast<double>(d.span);
  d.nodes_per_timestep = static_cast<double>(node_total) / static_cast<double>(d.span);
  return d;
}

struct HistogramEntry {
  std::optional<RelationId> relation;  // nullopt is the "others" bucket
  std::size_t count = 0;
  double share = 0;
};

/// Top-k relations by share (ties by id), plus an "others" bucket when
/// more relations are in use.
inline std::vector<HistogramEntry> relation_histogram(const TemporalMultiGraph& graph,
                                                      std::size_t top_k) {
  std::vector<std::size_t> counts(graph.relation_count(), 0);
  for (const auto& q : graph) ++counts[q.relation];
  std::vector<HistogramEntry> used;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r] > 0) used.push_back({static_cast<RelationId>(r), counts[r], 0.0});
  }
  std::sort(used.begin(), used.end(), [](const auto& a, const auto& b) {
    return a.count != b.count ? a.count > b.count : *a.relation < *b.relation;
  });
  const auto n = static_cast<double>(graph.size());
  std::vector<HistogramEntry> out;
  std::size_t rest = 0;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (i < top_k) {
      used[i].share = static_cast<double>(used[i].count) / n;
      out.push_back(used[i]);
    } else {
      rest += used[i].count;
    }
  }
  if (rest > 0) out.push_back({std::nullopt, rest, static_cast<double>(rest) / n});
  return out;
}

struct TimeBin {
  Timestamp first = 0;  // inclusive
  Timestamp last = 0;   // inclusive
  double mean = 0;
  std::size_t min = 0;
  std::size_t max = 0;
};

inline constexpr std::size_t kDefaultTimeBins = 20;

/// Per-timestep edge counts (zero-edge timesteps included) aggregated over
/// equal-width bins of [t_min, t_max]. Uses at most `span` bins.
inline std::vector<TimeBin> edges_over_time(const TemporalMultiGraph& graph,
                                            std::size_t bins = kDefaultTimeBins) {
  if (graph.empty()) return {};
  if (bins == 0) throw ConfigError("edges_over_time: bins must be positive");
  // Sparse per-timestep counts; timesteps without edges count as zero.
  const auto span = static_cast<std::uint64_t>(graph.t_max() - graph.t_min()) + 1;
  bins = static_cast<std::size_t>(std::min<std::uint64_t>(bins, span));
  std::vector<std::pair<std::uint64_t, std::size_t>> counts;  // (offset, edges)
  for (const auto& q : graph) {
    const auto off = static_cast<std::uint64_t>(q.timestamp - graph.t_min());
    if (counts.empty() || counts.back().first != off) counts.emplace_back(off, 0);
    ++counts.back().second;
  }
  std::vector<TimeBin> out;
  out.reserve(bins);
  std::size_t next = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const auto lo = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(b) * span / bins);
    const auto hi = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(b + 1) * span / bins);  // exclusive
    TimeBin bin;
    bin.first = graph.t_min() + static_cast<Timestamp>(lo);
    bin.last = graph.t_min() + static_cast<Timestamp>(hi) - 1;
    std::size_t sum = 0;
    std::size_t present = 0;
    std::size_t min_present = std::numeric_limits<std::size_t>::max();
    for (; next < counts.size() && counts[next].first < hi; ++next) {
      const auto c = counts[next].second;
      sum += c;
      ++present;
      min_present = std::min(min_present, c);
      bin.max = std::max(bin.max, c);
    }
    bin.min = present < hi - lo ? 0 : min_present;
    bin.mean = static_cast<double>(sum) / static_cast<double>(hi - lo);
    out.push_back(bin);
  }
  return out;
}

struct StatsReport {
  std::size_t quadruples = 0;
  std::size_t nodes = 0;
  std::size_t edge_types = 0;
  std::size_t node_types = 0;
  std::size_t timesteps = 0;  // distinct timestamps with edges
  Timestamp span = 0;         // t_max - t_min + 1, the density denominator
  Granularity granularity = Granularity::day;
  double inductive_test_nodes = 0;
  double direct_recurrency = 0;
  double recurrency = 0;
  double consecutiveness = 0;
  double mean_edges_per_timestep = 0;
  double mean_nodes_per_timestep = 0;
  std::vector<HistogramEntry> relation_histogram;
  std::vector<TimeBin> edges_over_time;
};

inline StatsReport compute_stats(const TemporalMultiGraph& full,
                                 const TemporalMultiGraph& train,
                                 const TemporalMultiGraph& test,
                                 std::size_t top_k = 10,
                                 std::size_t bins = kDefaultTimeBins) {
  StatsReport r;
  r.quadruples = full.size();
  r.nodes = full.node_count();
  r.edge_types = full.relation_count();
  r.node_types = full.node_type_count();
  r.timesteps = full.timestamps().size();
  r.granularity = full.granularity();
  r.inductive_test_nodes = inductive_node_proportion(train, test);
  r.direct_recurrency = direct_recurrency_degree(full, test);
  r.recurrency = recurrency_degree(full, test);
  r.consecutiveness = consecutiveness(full);
  const auto d = density_per_timestep(full);
  r.span = d.span;
  r.mean_edges_per_timestep = d.edges_per_timestep;
  r.mean_nodes_per_timestep = d.nodes_per_timestep;
  r.relation_histogram = relation_histogram(full, top_k);
  r.edges_over_time = edges_over_time(full, bins);
  return r;
}

/// Fixed key order; histogram sorted by share descending, ties by id.
inline nlohmann::ordered_json to_json(const StatsReport& r) {
  nlohmann::ordered_json j;
  j["quadruples"] = r.quadruples;
  j["nodes"] = r.nodes;
  j["edge_types"] = r.edge_types;
  j["node_types"] = r.node_types;
  j["timesteps"] = r.timesteps;
  j["span"] = r.span;
  j["granularity"] = std::string(to_string(r.granularity));
  j["inductive_test_nodes"] = r.inductive_test_nodes;
  j["direct_recurrency"] = r.direct_recurrency;
  j["recurrency"] = r.recurrency;
  j["consecutiveness"] = r.consecutiveness;
  j["mean_edges_per_timestep"] = r.mean_edges_per_timestep;
  j["mean_nodes_per_timestep"] = r.mean_nodes_per_timestep;
  j["mean_nodes_definition"] = "union of endpoints per timestep / span";
  auto hist = nlohmann::ordered_json::array();
  for (const auto& e : r.relation_histogram) {
    nlohmann::ordered_json row;
    if (e.relation) row["relation"] = *e.relation; else row["relation"] = "others";
    row["count"] = e.count;
    row["share"] = e.share;
    hist.push_back(row);
  }
  j["relation_histogram"] = hist;
  auto bins = nlohmann::ordered_json::array();
  for (const auto& b : r.edges_over_time) {
    bins.push_back({{"first", b.first}, {"last", b.last}, {"mean", b.mean},
                    {"min", b.min}, {"max", b.max}});
  }
  j["edges_over_time"] = bins;
  return j;
}

}  // namespace tkgbench

#endif  // TKGBENCH_STATS_HPP
