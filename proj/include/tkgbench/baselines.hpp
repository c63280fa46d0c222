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

#ifndef TKGBENCH_BASELINES_HPP
#define TKGBENCH_BASELINES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tkgbench/error.hpp"
#include "tkgbench/eval.hpp"
#include "tkgbench/graph.hpp"

namespace tkgbench {

// ---------------------------------------------------------------------------
// EdgeBank

enum class EdgeBankKey { pair, triple };

struct EdgeBankConfig {
  EdgeBankKey key = EdgeBankKey::pair;
  /// nullopt remembers everything; otherwise a key is active iff it was last
  /// seen at or after t_now - window.
  std::optional<Timestamp> window;
};

/// Default time window for EdgeBank_tw: the length of the validation part.
inline Timestamp default_edgebank_window(const SplitBoundaries& b) {
  return b.valid_end - b.train_end;
}

class EdgeBankMemory {
 public:
  explicit EdgeBankMemory(EdgeBankConfig config = {}) : config_(config) {
    if (config_.window && *config_.window < 0) throw ConfigError("EdgeBank window must be >= 0");
  }

  void observe(Timestamp t, std::span<const Quadruple> facts) {
    for (const auto& q : facts) last_seen_[key(q.subject, q.relation, q.object)] = t;
  }

  bool active(NodeId s, RelationId r, NodeId o, Timestamp now) const {
    auto it = last_seen_.find(key(s, r, o));
    if (it == last_seen_.end() || it->second >= now) return false;
    return !config_.window || it->second >= now - *config_.window;
  }

  const EdgeBankConfig& config() const { return config_; }
  std::size_t size() const { return last_seen_.size(); }

 private:
  Triple key(NodeId s, RelationId r, NodeId o) const {
    return {s, config_.key == EdgeBankKey::triple ? r : 0, o};
  }

  EdgeBankConfig config_;
  std::unordered_map<Triple, Timestamp, TripleHash> last_seen_;
};

/// Scores 1 for remembered (source, candidate) keys, 0 otherwise.
class EdgeBankScorer : public Scorer {
 public:
  explicit EdgeBankScorer(EdgeBankConfig config = {}) : memory_(config) {}

  std::string name() const override {
    return memory_.config().window ? "edgebank-tw" : "edgebank-inf";
  }

  void observe(Timestamp t, std::span<const Quadruple> facts) override {
    memory_.observe(t, facts);
  }

  void score(const EvalQuery& query, std::span<const NodeId> candidates,
             std::span<double> out) const override {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out[i] = memory_.active(query.source, query.relation, candidates[i], query.timestamp)
                   ? 1.0
                   : 0.0;
    }
  }

  const EdgeBankMemory& memory() const { return memory_; }

 private:
  EdgeBankMemory memory_;
};

// ---------------------------------------------------------------------------
// Recurrency baseline

inline constexpr std::string_view kRecurrencyFormulaVersion =
    "recb-v1: alpha*2^(-lambda*dt) + (1-alpha)*freq_r(c)/max freq_r; window bounds both terms";

struct RecurrencyParams {
  double lambda = 0.1;
  double alpha = 0.99;
  Timestamp window = 0;  // 0: unbounded history

  void validate() const {
    if (!(lambda >= 0.0)) throw ConfigError("recurrency lambda must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("recurrency alpha must be in [0, 1]");
    if (window < 0) throw ConfigError("recurrency window must be >= 0");
  }

  friend bool operator==(const RecurrencyParams&, const RecurrencyParams&) = default;
};

inline nlohmann::ordered_json to_json(const RecurrencyParams& p) {
  return {{"lambda", p.lambda}, {"alpha", p.alpha}, {"window", p.window},
          {"formula", std::string(kRecurrencyFormulaVersion)}};
}

struct Occurrence {
  NodeId object = 0;
  Timestamp timestamp = 0;
};

/// Append-only record of observed facts, keyed for the recurrency scorer.
class HistoryIndex {
 public:
  void append(Timestamp t, std::span<const Quadruple> facts) {
    if (high_water_ && t <= *high_water_) {
      throw ProtocolError("history must grow in time: " + std::to_string(t) +
                          " after " + std::to_string(*high_water_));
    }
    for (const auto& q : facts) {
      if (q.timestamp != t) throw ProtocolError("fact timestamp differs from observed timestamp");
    }
    high_water_ = t;
    for (const auto& q : facts) {
      by_pair_[pair_key(q.subject, q.relation)].push_back({q.object, t});
      if (q.relation >= by_relation_.size()) {
        by_relation_.resize(q.relation + 1);
        frequency_.resize(q.relation + 1);
        max_frequency_.resize(q.relation + 1, 0);
      }
      by_relation_[q.relation].push_back({q.object, t});
      const auto f = ++frequency_[q.relation][q.object];
      max_frequency_[q.relation] = std::max(max_frequency_[q.relation], f);
    }
  }

  std::optional<Timestamp> high_water() const { return high_water_; }

  /// (object, timestamp) for facts (s, r, *, *), ascending in time.
  std::span<const Occurrence> occurrences(NodeId s, RelationId r) const {
    auto it = by_pair_.find(pair_key(s, r));
    if (it == by_pair_.end()) return {};
    return it->second;
  }

  /// (object, timestamp) for facts (*, r, *, *), ascending in time.
  std::span<const Occurrence> relation_occurrences(RelationId r) const {
    if (r >= by_relation_.size()) return {};
    return by_relation_[r];
  }

  std::uint64_t frequency(RelationId r, NodeId o) const {
    if (r >= frequency_.size()) return 0;
    auto it = frequency_[r].find(o);
    return it == frequency_[r].end() ? 0 : it->second;
  }

  std::uint64_t max_frequency(RelationId r) const {
    return r < max_frequency_.size() ? max_frequency_[r] : 0;
  }

 private:
  static std::uint64_t pair_key(NodeId s, RelationId r) {
    return (static_cast<std::uint64_t>(s) << 32) | r;
  }

  std::optional<Timestamp> high_water_;
  std::unordered_map<std::uint64_t, std::vector<Occurrence>> by_pair_;
  std::vector<std::vector<Occurrence>> by_relation_;
  std::vector<std::unordered_map<NodeId, std::uint64_t>> frequency_;
  std::vector<std::uint64_t> max_frequency_;
};

/// Mixes a strict term (time-decayed recurrence of the exact (s, r, c)
/// fact) with a relaxed term (how often c was the object of r).
///
///   strict(c)  = 2^(-lambda * (t - k)), k the latest past time of (s, r, c)
///   relaxed(c) = freq_r(c) / max_c' freq_r(c')
///   score(c)   = alpha * strict(c) + (1 - alpha) * relaxed(c)
///
/// With window > 0 only facts with t - k <= window count, in both terms.
class RecurrencyScorer : public Scorer {
 public:
  explicit RecurrencyScorer(RecurrencyParams params = {}) : params_(params) {
    params_.validate();
  }

  std::string name() const override { return "recurrency"; }

  void observe(Timestamp t, std::span<const Quadruple> facts) override {
    index_.append(t, facts);
  }

  void score(const EvalQuery& query, std::span<const NodeId> candidates,
             std::span<double> out) const override {
    const Timestamp t = query.timestamp;
    if (index_.high_water() && *index_.high_water() >= t) {
      throw ProtocolError("recurrency scorer queried at " + std::to_string(t) +
                          " after observing " + std::to_string(*index_.high_water()));
    }
    const Timestamp oldest =
        params_.window > 0 ? t - params_.window : std::numeric_limits<Timestamp>::min();

    std::unordered_map<NodeId, Timestamp> latest;
    const auto occ = index_.occurrences(query.source, query.relation);
    for (auto it = occ.rbegin(); it != occ.rend() && it->timestamp >= oldest; ++it) {
      latest.emplace(it->object, it->timestamp);
    }

    std::unordered_map<NodeId, std::uint64_t> windowed;
    std::uint64_t max_freq = 0;
    if (params_.window > 0) {
      const auto rel = index_.relation_occurrences(query.relation);
      for (auto it = rel.rbegin(); it != rel.rend() && it->timestamp >= oldest; ++it) {
        max_freq = std::max(max_freq, ++windowed[it->object]);
      }
    } else {
      max_freq = index_.max_frequency(query.relation);
    }

    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const NodeId c = candidates[i];
      double strict = 0.0;
      if (auto it = latest.find(c); it != latest.end()) {
        strict = std::exp2(-params_.lambda * static_cast<double>(t - it->second));
      }
      double relaxed = 0.0;
      if (max_freq > 0) {
        std::uint64_t f = 0;
        if (params_.window > 0) {
          if (auto it = windowed.find(c); it != windowed.end()) f = it->second;
        } else {
          f = index_.frequency(query.relation, c);
        }
        relaxed = static_cast<double>(f) / static_cast<double>(max_freq);
      }
      out[i] = params_.alpha * strict + (1.0 - params_.alpha) * relaxed;
    }
  }

  const RecurrencyParams& params() const { return params_; }
  const HistoryIndex& index() const { return index_; }

  /// Same history, different parameters.
  RecurrencyScorer with_params(RecurrencyParams params) const {
    RecurrencyScorer copy = *this;
    params.validate();
    copy.params_ = params;
    return copy;
  }

 private:
  RecurrencyParams params_;
  HistoryIndex index_;
};

struct RecurrencyGrid {
  std::vector<double> lambdas{0.01, 0.1, 1.0};
  std::vector<double> alphas{0.9, 0.99, 0.999};
  std::vector<Timestamp> windows{0, 100, 500};
};

struct GridTrial {
  RecurrencyParams params;
  double mrr = 0;
};

struct GridSearchResult {
  RecurrencyParams best;
  double best_mrr = 0;
  std::vector<GridTrial> trials;  // grid order: lambda, alpha, window
};

/// True if `a` should be preferred over `b`: higher MRR, then smaller
/// lambda, larger alpha, smaller window.
inline bool preferred(const GridTrial& a, const GridTrial& b) {
  if (a.mrr != b.mrr) return a.mrr > b.mrr;
  if (a.params.lambda != b.params.lambda) return a.params.lambda < b.params.lambda;
  if (a.params.alpha != b.params.alpha) return a.params.alpha > b.params.alpha;
  return a.params.window < b.params.window;
}

/// Validation-set grid search over every (lambda, alpha, window).
inline GridSearchResult grid_search_recurrency(const EvalContext& ctx,
                                               const NegativeSampleSet& valid_negatives,
                                               const RecurrencyGrid& grid,
                                               EvalOptions options = {}) {
  if (grid.lambdas.empty() || grid.alphas.empty() || grid.windows.empty()) {
    throw ConfigError("recurrency grid has an empty axis");
  }
  RecurrencyScorer warmed;
  warm_up(warmed, ctx.universe(), ctx.universe().t_min(), ctx.history_end(EvalSplit::validation));
  options.warm_up = false;

  GridSearchResult out;
  for (double lambda : grid.lambdas) {
    for (double alpha : grid.alphas) {
      for (Timestamp window : grid.windows) {
        auto scorer = warmed.with_params({lambda, alpha, window});
        const auto result =
            evaluate_single_step(scorer, ctx, EvalSplit::validation, valid_negatives, options);
        GridTrial trial{{lambda, alpha, window}, result.mrr};
        if (out.trials.empty() || preferred(trial, {out.best, out.best_mrr})) {
          out.best = trial.params;
          out.best_mrr = trial.mrr;
        }
        out.trials.push_back(trial);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference scorers

/// Scores the true destination 1 and everything else 0. Reads the answer
/// from the query; only meaningful as a harness check.
class OracleScorer : public Scorer {
 public:
  std::string name() const override { return "oracle"; }
  void observe(Timestamp, std::span<const Quadruple>) override {}
  void score(const EvalQuery& query, std::span<const NodeId> candidates,
             std::span<double> out) const override {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out[i] = candidates[i] == query.true_destination ? 1.0 : 0.0;
    }
  }
};

/// Same score for every candidate: a full tie.
class ConstantScorer : public Scorer {
 public:
  std::string name() const override { return "constant"; }
  void observe(Timestamp, std::span<const Quadruple>) override {}
  void score(const EvalQuery&, std::span<const NodeId>, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
  }
};

}  // namespace tkgbench

#endif  // TKGBENCH_BASELINES_HPP
