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

#ifndef TKGBENCH_NEGSAMP_HPP
#define TKGBENCH_NEGSAMP_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tkgbench/checksum.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/graph.hpp"
#include "tkgbench/parallel.hpp"
#include "tkgbench/query.hpp"
#include "tkgbench/rng.hpp"

namespace tkgbench {

enum class SamplingStrategy : std::uint8_t {
  all = 0,         // 1-vs-all
  type_aware = 1,  // 1-vs-q from the relation's tail pool, padded at random
  node_type = 2,   // 1-vs-q among nodes of the answer's node type
  random = 3,      // 1-vs-q uniformly over all nodes
};

inline std::string_view to_string(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::all: return "all";
    case SamplingStrategy::type_aware: return "type-aware";
    case SamplingStrategy::node_type: return "node-type";
    case SamplingStrategy::random: return "random";
  }
  return "all";
}

inline SamplingStrategy parse_sampling_strategy(std::string_view s) {
  if (s == "all") return SamplingStrategy::all;
  if (s == "type-aware" || s == "type_aware") return SamplingStrategy::type_aware;
  if (s == "node-type" || s == "node_type") return SamplingStrategy::node_type;
  if (s == "random") return SamplingStrategy::random;
  throw ConfigError("unknown sampling strategy '" + std::string(s) + "'");
}

inline constexpr std::string_view kNegativeGeneratorVersion = "tkgbench-negsamp/1";

struct Provenance {
  std::string dataset;
  std::string split;
  std::string generator{kNegativeGeneratorVersion};

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct NegativeRecord {
  EvalQuery query;
  /// Sorted node ids. For strategy `all` these are the excluded temporal
  /// conflicts; otherwise the sampled candidates.
  std::vector<NodeId> ids;

  friend bool operator==(const NegativeRecord&, const NegativeRecord&) = default;
};

/// Pre-generated candidate lists, one record per evaluation query. The
/// true destination and every temporal conflict are never candidates.
struct NegativeSampleSet {
  SamplingStrategy strategy = SamplingStrategy::all;
  std::optional<std::uint64_t> q;  // nullopt: unbounded
  std::uint64_t seed = 0;
  std::uint64_t node_count = 0;
  Provenance provenance;
  std::vector<NegativeRecord> records;

  bool stores_exclusions() const { return strategy == SamplingStrategy::all; }

  /// Candidate destinations of record i, ascending, truth excluded.
  std::vector<NodeId> candidates(std::size_t i) const {
    const auto& rec = records.at(i);
    if (!stores_exclusions()) return rec.ids;
    std::vector<NodeId> out;
    out.reserve(node_count);
    auto excl = rec.ids.begin();
    for (NodeId v = 0; v < node_count; ++v) {
      while (excl != rec.ids.end() && *excl < v) ++excl;
      if (excl != rec.ids.end() && *excl == v) continue;
      if (v == rec.query.true_destination) continue;
      out.push_back(v);
    }
    return out;
  }

  friend bool operator==(const NegativeSampleSet&, const NegativeSampleSet&) = default;
};

/// Tail pool per relation: every node observed as object of that relation.
using TailPools = std::vector<std::vector<NodeId>>;

inline TailPools collect_tail_pools(const TemporalMultiGraph& graph) {
  TailPools pools(graph.relation_count());
  for (const auto& q : graph) pools[q.relation].push_back(q.object);
  for (auto& p : pools) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return pools;
}

struct SamplingOptions {
  SamplingStrategy strategy = SamplingStrategy::all;
  std::optional<std::uint64_t> q;
  std::uint64_t seed = 0;
  /// node-type strategy: emit the whole same-type universe instead of q.
  bool whole_type_universe = false;
  unsigned threads = 1;
  Provenance provenance;
};

namespace detail {

/// Objects o != truth with (s, r, o, t) in the graph, ascending.
inline std::vector<NodeId> temporal_conflicts(const TemporalMultiGraph& universe,
                                              const EvalQuery& query) {
  std::vector<NodeId> out;
  for (const auto& q : universe.objects_at(query.source, query.relation, query.timestamp)) {
    if (q.object != query.true_destination) out.push_back(q.object);
  }
  return out;
}

inline std::vector<NodeId> with_inserted(std::vector<NodeId> sorted, NodeId v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  if (it == sorted.end() || *it != v) sorted.insert(it, v);
  return sorted;
}

inline std::vector<NodeId> set_minus(const std::vector<NodeId>& a,
                                     const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<NodeId> set_union(const std::vector<NodeId>& a,
                                     const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// k distinct elements of a sorted list, ascending.
inline std::vector<NodeId> pick(const std::vector<NodeId>& items, std::uint64_t k,
                                SplitMix64& rng) {
  std::vector<NodeId> out;
  for (auto idx : sample_distinct(k, items.size(), rng)) out.push_back(items[idx]);
  return out;
}

/// k distinct values from [0, n) \ excluded (excluded sorted, within range).
inline std::vector<NodeId> pick_complement(std::uint64_t n,
                                           const std::vector<NodeId>& excluded,
                                           std::uint64_t k, SplitMix64& rng) {
  const std::uint64_t available = n - excluded.size();
  std::vector<NodeId> out;
  std::size_t p = 0;
  for (auto idx : sample_distinct(k, available, rng)) {
    // idx-th value of the complement.
    std::uint64_t v = idx + p;
    while (p < excluded.size() && excluded[p] <= v) {
      ++p;
      v = idx + p;
    }
    out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

inline std::uint64_t effective_q(const std::optional<std::uint64_t>& q,
                                 std::uint64_t node_count) {
  if (!q) throw ConfigError("1-vs-q sampling requires q");
  if (*q < 1) throw ConfigError("q must be at least 1");
  const std::uint64_t cap = node_count > 0 ? node_count - 1 : 0;
  return std::min(*q, cap);
}

template <typename Fn>
NegativeSampleSet generate_with(const TemporalMultiGraph& universe,
                                std::span<const EvalQuery> queries,
                                const SamplingOptions& options, std::optional<std::uint64_t> q,
                                Fn&& per_query) {
  NegativeSampleSet set;
  set.strategy = options.strategy;
  set.q = q;
  set.seed = options.seed;
  set.node_count = universe.node_count();
  set.provenance = options.provenance;
  set.records.resize(queries.size());
  parallel_for(queries.size(), options.threads, [&](std::size_t i) {
    const auto& query = queries[i];
    if (query.source >= universe.node_count() ||
        query.true_destination >= universe.node_count() ||
        query.relation >= universe.relation_count()) {
      throw ProtocolError("query " + std::to_string(i) + " outside the graph vocabulary");
    }
    auto rng = keyed_stream(options.seed, i);
    set.records[i] = {query, per_query(query, rng)};
  });
  return set;
}

}  // namespace detail

/// 1-vs-all: records hold only the conflicts to exclude.
inline NegativeSampleSet generate_all(const TemporalMultiGraph& universe,
                                      std::span<const EvalQuery> queries,
                                      SamplingOptions options = {}) {
  options.strategy = SamplingStrategy::all;
  return detail::generate_with(universe, queries, options, std::nullopt,
                               [&](const EvalQuery& query, SplitMix64&) {
                                 return detail::temporal_conflicts(universe, query);
                               });
}

/// 1-vs-q over the query relation's tail pool; short pools are padded by
/// uniform draws from the remaining nodes. q is clamped to node_count - 1.
inline NegativeSampleSet generate_type_aware(const TemporalMultiGraph& universe,
                                             std::span<const EvalQuery> queries,
                                             SamplingOptions options) {
  options.strategy = SamplingStrategy::type_aware;
  const auto q = detail::effective_q(options.q, universe.node_count());
  const auto pools = collect_tail_pools(universe);
  const std::uint64_t n = universe.node_count();
  return detail::generate_with(
      universe, queries, options, q, [&](const EvalQuery& query, SplitMix64& rng) {
        const auto excluded = detail::with_inserted(
            detail::temporal_conflicts(universe, query), query.true_destination);
        const auto& pool = pools[query.relation];
        auto from_pool = detail::set_minus(pool, excluded);
        if (from_pool.size() >= q) return detail::pick(from_pool, q, rng);
        const auto blocked = detail::set_union(pool, excluded);
        const auto pad = detail::pick_complement(n, blocked, q - from_pool.size(), rng);
        return detail::set_union(from_pool, pad);
      });
}

/// 1-vs-q among nodes sharing the answer's node type. No cross-type padding:
/// a small type universe yields a short list.
inline NegativeSampleSet generate_node_type(const TemporalMultiGraph& universe,
                                            std::span<const EvalQuery> queries,
                                            SamplingOptions options) {
  options.strategy = SamplingStrategy::node_type;
  if (!universe.node_types()) throw DataError("node-type sampling needs node types");
  const auto& types = *universe.node_types();
  const auto q = detail::effective_q(options.q, universe.node_count());
  std::vector<std::vector<NodeId>> members(universe.node_type_count());
  for (NodeId v = 0; v < types.size(); ++v) members[types[v]].push_back(v);
  return detail::generate_with(
      universe, queries, options, q, [&](const EvalQuery& query, SplitMix64& rng) {
        const auto type = types[query.true_destination];
        if (type >= members.size()) {
          throw DataError("unknown node type " + std::to_string(type));
        }
        const auto excluded = detail::with_inserted(
            detail::temporal_conflicts(universe, query), query.true_destination);
        auto available = detail::set_minus(members[type], excluded);
        if (options.whole_type_universe || available.size() <= q) return available;
        return detail::pick(available, q, rng);
      });
}

/// 1-vs-q uniformly over all nodes, ignoring relation and node types.
inline NegativeSampleSet generate_random(const TemporalMultiGraph& universe,
                                         std::span<const EvalQuery> queries,
                                         SamplingOptions options) {
  options.strategy = SamplingStrategy::random;
  const auto q = detail::effective_q(options.q, universe.node_count());
  const std::uint64_t n = universe.node_count();
  return detail::generate_with(
      universe, queries, options, q, [&](const EvalQuery& query, SplitMix64& rng) {
        const auto excluded = detail::with_inserted(
            detail::temporal_conflicts(universe, query), query.true_destination);
        return detail::pick_complement(n, excluded, std::min<std::uint64_t>(q, n - excluded.size()),
                                       rng);
      });
}

/// Dispatches on options.strategy. `universe` is the full dataset (all
/// splits), with inverse relations for TKG queries.
inline NegativeSampleSet generate_negatives(const TemporalMultiGraph& universe,
                                            std::span<const EvalQuery> queries,
                                            const SamplingOptions& options) {
  switch (options.strategy) {
    case SamplingStrategy::all: return generate_all(universe, queries, options);
    case SamplingStrategy::type_aware: return generate_type_aware(universe, queries, options);
    case SamplingStrategy::node_type: return generate_node_type(universe, queries, options);
    case SamplingStrategy::random: return generate_random(universe, queries, options);
  }
  throw ConfigError("unknown sampling strategy");
}

// Binary layout, little-endian:
//   magic "TKGBNEGS", u32 version, u8 strategy, u8 q_bounded, u64 q, u64 seed,
//   u64 node_count, 3 x (u32 length, bytes) provenance, u64 record count,
//   records: u32 source, u32 relation, i64 timestamp, u32 truth, u8 direction,
//            varint count, varint deltas of the sorted ids,
//   trailer: SHA-256 of everything before it.

inline constexpr std::array<char, 8> kNegativeMagic = {'T', 'K', 'G', 'B', 'N', 'E', 'G', 'S'};
inline constexpr std::uint32_t kNegativeFormatVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { fixed(v, 4); }
  void u64(std::uint64_t v) { fixed(v, 8); }
  void i64(std::int64_t v) { fixed(static_cast<std::uint64_t>(v), 8); }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      u8(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    u8(static_cast<std::uint8_t>(v));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void raw(std::string_view s) { buf_.append(s); }
  std::string& buffer() { return buf_; }

 private:
  void fixed(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(fixed(4)); }
  std::uint64_t u64() { return fixed(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(fixed(8)); }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const auto b = u8();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw CorruptionError("varint too long");
  }
  std::string str() {
    const auto len = u32();
    need(len);
    std::string s(data_.substr(pos_, len));
    pos_ += len;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CorruptionError("truncated negative-sample file");
  }
  std::uint64_t fixed(int bytes) {
    need(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * i);
    }
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string encode_negative_set(const NegativeSampleSet& set) {
  detail::ByteWriter w;
  w.raw(std::string_view(kNegativeMagic.data(), kNegativeMagic.size()));
  w.u32(kNegativeFormatVersion);
  w.u8(static_cast<std::uint8_t>(set.strategy));
  w.u8(set.q ? 1 : 0);
  w.u64(set.q.value_or(0));
  w.u64(set.seed);
  w.u64(set.node_count);
  w.str(set.provenance.dataset);
  w.str(set.provenance.split);
  w.str(set.provenance.generator);
  w.u64(set.records.size());
  for (const auto& rec : set.records) {
    w.u32(rec.query.source);
    w.u32(rec.query.relation);
    w.i64(rec.query.timestamp);
    w.u32(rec.query.true_destination);
    w.u8(static_cast<std::uint8_t>(rec.query.direction));
    w.varint(rec.ids.size());
    NodeId prev = 0;
    for (auto id : rec.ids) {
      w.varint(id - prev);
      prev = id;
    }
  }
  const auto digest = Sha256().update(w.buffer()).finish();
  w.raw(std::string_view(reinterpret_cast<const char*>(digest.data()), digest.size()));
  return std::move(w.buffer());
}

inline NegativeSampleSet decode_negative_set(std::string_view bytes) {
  if (bytes.size() < kNegativeMagic.size() ||
      std::memcmp(bytes.data(), kNegativeMagic.data(), kNegativeMagic.size()) != 0) {
    throw FormatError("not a negative-sample file (bad magic)");
  }
  constexpr std::size_t kDigest = 32;
  if (bytes.size() < kNegativeMagic.size() + 4 + kDigest) {
    throw CorruptionError("truncated negative-sample file");
  }
  const auto body = bytes.substr(0, bytes.size() - kDigest);
  const auto digest = Sha256().update(body).finish();
  if (std::memcmp(digest.data(), bytes.data() + body.size(), kDigest) != 0) {
    throw CorruptionError("negative-sample checksum mismatch");
  }
  detail::ByteReader r(body.substr(kNegativeMagic.size()));
  const auto version = r.u32();
  if (version != kNegativeFormatVersion) {
    throw FormatError("unsupported negative-sample version " + std::to_string(version));
  }
  NegativeSampleSet set;
  const auto strategy = r.u8();
  if (strategy > static_cast<std::uint8_t>(SamplingStrategy::random)) {
    throw CorruptionError("unknown strategy code " + std::to_string(strategy));
  }
  set.strategy = static_cast<SamplingStrategy>(strategy);
  const bool bounded = r.u8() != 0;
  const auto q = r.u64();
  if (bounded) set.q = q;
  set.seed = r.u64();
  set.node_count = r.u64();
  set.provenance.dataset = r.str();
  set.provenance.split = r.str();
  set.provenance.generator = r.str();
  const auto count = r.u64();
  if (count > body.size()) throw CorruptionError("implausible record count");
  set.records.resize(count);
  for (auto& rec : set.records) {
    rec.query.source = r.u32();
    rec.query.relation = r.u32();
    rec.query.timestamp = r.i64();
    rec.query.true_destination = r.u32();
    const auto dir = r.u8();
    if (dir > 1) throw CorruptionError("bad direction code");
    rec.query.direction = static_cast<Direction>(dir);
    const auto n = r.varint();
    if (n > body.size()) throw CorruptionError("implausible candidate count");
    rec.ids.resize(n);
    std::uint64_t prev = 0;
    for (auto& id : rec.ids) {
      prev += r.varint();
      if (prev >= set.node_count) throw CorruptionError("candidate id out of range");
      id = static_cast<NodeId>(prev);
    }
  }
  if (!r.done()) throw CorruptionError("trailing bytes in negative-sample file");
  return set;
}

inline void write_negative_set(const NegativeSampleSet& set, const std::filesystem::path& path) {
  const auto bytes = encode_negative_set(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline NegativeSampleSet read_negative_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_negative_set(bytes);
}

}  // namespace tkgbench

#endif  // TKGBENCH_NEGSAMP_HPP
