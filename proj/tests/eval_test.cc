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


#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <set>

#include "test_util.hpp"
#include "tkgbench/baselines.hpp"
#include "tkgbench/dataset_io.hpp"
#include "tkgbench/eval.hpp"
#include "tkgbench/negsamp.hpp"
#include "tkgbench/syngen.hpp"

namespace tkgbench {
namespace {

using testing::g4;

void expect_same(const EvalResult& a, const EvalResult& b) {
  EXPECT_EQ(a.mrr, b.mrr);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.queries, b.queries);
  EXPECT_EQ(a.doubled_ranks, b.doubled_ranks);
  ASSERT_EQ(a.per_relation.size(), b.per_relation.size());
  for (const auto& [r, e] : a.per_relation) {
    EXPECT_EQ(e.mrr, b.per_relation.at(r).mrr);
    EXPECT_EQ(e.queries, b.per_relation.at(r).queries);
  }
  ASSERT_EQ(a.per_timestep.size(), b.per_timestep.size());
  for (std::size_t i = 0; i < a.per_timestep.size(); ++i) {
    EXPECT_EQ(a.per_timestep[i].mrr, b.per_timestep[i].mrr);
  }
}

// Applies f to another scorer's output.
class TransformedScorer : public Scorer {
 public:
  TransformedScorer(Scorer& inner, std::function<double(double)> f) : inner_(inner), f_(std::move(f)) {}
  std::string name() const override { return "transformed"; }
  void observe(Timestamp t, std::span<const Quadruple> facts) override { inner_.observe(t, facts); }
  void score(const EvalQuery& q, std::span<const NodeId> c, std::span<double> out) const override {
    inner_.score(q, c, out);
    for (auto& x : out) x = f_(x);
  }

 private:
  Scorer& inner_;
  std::function<double(double)> f_;
};

struct Setup {
  TemporalMultiGraph graph;
  SplitBoundaries boundaries;
  GraphKind kind;
};

Setup synthetic(std::uint64_t seed, std::size_t node_types = 0) {
  SynthConfig c;
  c.seed = seed;
  c.nodes = 30;
  c.edge_rate = 15;
  c.node_types = node_types;
  c.p_repeat = 0.5;
  auto g = generate(c);
  const auto b = chronological_split(g).boundaries;
  return {std::move(g), b, c.kind()};
}

NegativeSampleSet negatives_for(const EvalContext& ctx, EvalSplit split, SamplingStrategy s,
                                std::optional<std::uint64_t> q, std::uint64_t seed = 1) {
  SamplingOptions o;
  o.strategy = s;
  o.q = q;
  o.seed = seed;
  return generate_negatives(ctx.universe(), ctx.queries(split), o);
}

TEST(ExpandQueries, G4) {
  const auto test = g4().slice(3, 3);
  const auto tkg = expand_queries(test, GraphKind::tkg);
  ASSERT_EQ(tkg.size(), 4u);
  const EvalQuery head{1, 0 + 2, 3, 0, Direction::head};
  EXPECT_NE(std::find(tkg.begin(), tkg.end(), head), tkg.end());
  EXPECT_EQ(expand_queries(test, GraphKind::thg).size(), 2u);
  EXPECT_THROW(expand_queries(add_inverse_relations(test).graph, GraphKind::tkg), ProtocolError);
}

TEST(Filter, SameTimestampOnly) {
  TemporalMultiGraph full({{0, 0, 1, 3}, {0, 0, 2, 3}, {0, 0, 3, 2}}, 4, 1);
  const EvalQuery q{0, 0, 3, 1, Direction::tail};
  const std::vector<NodeId> candidates{0, 2, 3};
  EXPECT_EQ(time_aware_filter(candidates, q, full), (std::vector<NodeId>{0, 3}));
  const EvalQuery later{0, 0, 4, 1, Direction::tail};
  EXPECT_EQ(time_aware_filter(candidates, later, full), candidates);
  const std::vector<NodeId> with_truth{1, 2};
  EXPECT_EQ(time_aware_filter(with_truth, q, full), std::vector<NodeId>{1});
}

TEST(Filter, SoundOnSyntheticGraphs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = synthetic(seed);
    const auto universe = add_inverse_relations(s.graph).graph;
    std::vector<NodeId> everyone(universe.node_count());
    std::iota(everyone.begin(), everyone.end(), 0);
    for (const auto& query : expand_queries(s.graph.slice(s.boundaries.valid_end + 1, s.graph.t_max()),
                                            GraphKind::tkg)) {
      std::vector<NodeId> naive;
      for (auto c : everyone) {
        bool fact = false;
        for (const auto& f : universe) {
          fact = fact || (f.subject == query.source && f.relation == query.relation &&
                          f.object == c && f.timestamp == query.timestamp);
        }
        if (c == query.true_destination || !fact) naive.push_back(c);
      }
      EXPECT_EQ(time_aware_filter(everyone, query, universe), naive);
    }
  }
}

TEST(AverageRank, HandCases) {
  const std::vector<double> unique{0.1, 0.9, 0.3};
  EXPECT_EQ(average_rank(unique, 1), 1.0);
  // candidates {0: 0.1, 1 (truth): 0.9, 2: 0.9, 3: 0.2}
  const std::vector<double> tie{0.1, 0.9, 0.9, 0.2};
  EXPECT_EQ(average_rank(tie, 1), 1.5);
  EXPECT_EQ(1.0 / average_rank(tie, 1), 2.0 / 3.0);
  for (std::size_t m = 0; m < 12; ++m) {
    const std::vector<double> flat(m + 1, 0.25);
    EXPECT_EQ(average_rank(flat, m), 1.0 + static_cast<double>(m) / 2.0);
  }
  const std::vector<double> worst{3, 2, 1};
  EXPECT_EQ(doubled_rank(worst, 2), 6u);
}

TEST(Accumulator, OrderIndependentAndHits) {
  RankAccumulator a, b, merged;
  const std::vector<std::uint64_t> ranks{2, 3, 21, 20, 4, 7, 2, 11};
  for (auto d : ranks) a.add(d);
  for (auto it = ranks.rbegin(); it != ranks.rend(); ++it) b.add(*it);
  EXPECT_EQ(a.mrr(), b.mrr());
  RankAccumulator left, right;
  for (std::size_t i = 0; i < ranks.size(); ++i) (i % 2 ? left : right).add(ranks[i]);
  merged.merge(left);
  merged.merge(right);
  EXPECT_EQ(merged.mrr(), a.mrr());
  EXPECT_EQ(a.hits(1), 2.0 / 8.0);
  EXPECT_EQ(a.hits(10), 7.0 / 8.0);  // doubled 21 is rank 10.5
  EXPECT_LE(a.hits(1), a.mrr());
}

TEST(SingleStep, OracleScorerIsPerfect) {
  const auto s = synthetic(3);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  OracleScorer oracle;
  for (auto strategy : {SamplingStrategy::all, SamplingStrategy::random}) {
    auto negs = negatives_for(ctx, EvalSplit::test, strategy, 20);
    const auto r = evaluate_single_step(oracle, ctx, EvalSplit::test, negs);
    EXPECT_EQ(r.mrr, 1.0);
    for (auto [k, v] : r.hits) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(r.queries, ctx.queries(EvalSplit::test).size());
  }
}

TEST(SingleStep, ConstantScorerFullTie) {
  const auto s = synthetic(5);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  ConstantScorer constant;
  auto negs = negatives_for(ctx, EvalSplit::test, SamplingStrategy::random, 9);
  for (std::size_t i = 0; i < negs.records.size(); ++i) ASSERT_EQ(negs.candidates(i).size(), 9u);
  const auto r = evaluate_single_step(constant, ctx, EvalSplit::test, negs);
  EXPECT_EQ(r.mrr, 2.0 / 11.0);
  EXPECT_EQ(r.hits.at(1), 0.0);
  EXPECT_EQ(r.hits.at(10), 1.0);
  EXPECT_EQ(r.ties.queries_with_ties, r.queries);
  EXPECT_EQ(r.ties.tied_candidates, 9 * r.queries);
}

TEST(SingleStep, MissingRecordIsProtocolError) {
  const auto s = synthetic(5);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  auto negs = negatives_for(ctx, EvalSplit::test, SamplingStrategy::random, 4);
  negs.records.pop_back();
  ConstantScorer constant;
  EXPECT_THROW(evaluate_single_step(constant, ctx, EvalSplit::test, negs), ProtocolError);
  auto valid = negatives_for(ctx, EvalSplit::validation, SamplingStrategy::random, 4);
  EXPECT_THROW(evaluate_single_step(constant, ctx, EvalSplit::test, valid), ProtocolError);
  auto wrong_size = negatives_for(ctx, EvalSplit::test, SamplingStrategy::random, 4);
  wrong_size.node_count += 1;
  EXPECT_THROW(evaluate_single_step(constant, ctx, EvalSplit::test, wrong_size), ProtocolError);
}

TEST(SingleStep, ThreadCountDoesNotChangeResult) {
  const auto s = synthetic(8);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  auto negs = negatives_for(ctx, EvalSplit::test, SamplingStrategy::all, std::nullopt);
  EvalOptions one;
  one.record_ranks = true;
  EvalOptions many = one;
  many.threads = 4;
  RecurrencyScorer a, b;
  expect_same(evaluate_single_step(a, ctx, EvalSplit::test, negs, one),
              evaluate_single_step(b, ctx, EvalSplit::test, negs, many));
}

TEST(SingleStep, StrictlyIncreasingTransformsAreInvisible) {
  const auto s = synthetic(9);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  auto negs = negatives_for(ctx, EvalSplit::test, SamplingStrategy::all, std::nullopt);
  EvalOptions opts;
  opts.record_ranks = true;
  RecurrencyScorer base_scorer;
  const auto base = evaluate_single_step(base_scorer, ctx, EvalSplit::test, negs, opts);
  for (auto f : std::vector<std::function<double(double)>>{
           [](double x) { return 4.0 * x; }, [](double x) { return std::exp(x); },
           [](double x) { return x * x * x; }}) {
    RecurrencyScorer inner;
    TransformedScorer scorer(inner, f);
    expect_same(evaluate_single_step(scorer, ctx, EvalSplit::test, negs, opts), base);
  }
}

TEST(SingleStep, SubsetMonotonicityPerQuery) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto s = synthetic(seed);
    EvalContext ctx(s.graph, s.boundaries, s.kind);
    EvalOptions opts;
    opts.record_ranks = true;
    RecurrencyScorer on_all;
    const auto all = evaluate_single_step(
        on_all, ctx, EvalSplit::test,
        negatives_for(ctx, EvalSplit::test, SamplingStrategy::all, std::nullopt), opts);
    for (auto strategy : {SamplingStrategy::type_aware, SamplingStrategy::random}) {
      RecurrencyScorer on_q;
      const auto sub = evaluate_single_step(
          on_q, ctx, EvalSplit::test, negatives_for(ctx, EvalSplit::test, strategy, 5, seed), opts);
      ASSERT_EQ(sub.doubled_ranks.size(), all.doubled_ranks.size());
      for (std::size_t i = 0; i < sub.doubled_ranks.size(); ++i) {
        EXPECT_LE(sub.doubled_ranks[i], all.doubled_ranks[i]);
      }
      EXPECT_GE(sub.mrr, all.mrr);
    }
  }
}

TEST(Breakdown, WeightedMeanMatchesGlobal) {
  const auto s = synthetic(11);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  RecurrencyScorer scorer;
  const auto r = evaluate_single_step(
      scorer, ctx, EvalSplit::test,
      negatives_for(ctx, EvalSplit::test, SamplingStrategy::all, std::nullopt));
  double weighted = 0;
  std::uint64_t n = 0;
  for (const auto& [rel, e] : per_relation_breakdown(r)) {
    weighted += e.mrr * static_cast<double>(e.queries);
    n += e.queries;
  }
  EXPECT_EQ(n, r.queries);
  EXPECT_NEAR(weighted / static_cast<double>(n), r.mrr, 1e-12);
}

TEST(Breakdown, TwoRelationsHalfAndHalf) {
  // one query per relation; the scorer gets relation 0 right and relation 1 wrong
  class Split : public Scorer {
   public:
    std::string name() const override { return "split"; }
    void observe(Timestamp, std::span<const Quadruple>) override {}
    void score(const EvalQuery& q, std::span<const NodeId> c, std::span<double> out) const override {
      for (std::size_t i = 0; i < c.size(); ++i) {
        const bool truth = c[i] == q.true_destination;
        out[i] = (q.relation == 0) == truth ? 1.0 : 0.0;
      }
    }
  };
  TemporalMultiGraph g({{0, 0, 1, 0}, {0, 0, 1, 1}, {0, 0, 1, 2}, {2, 1, 3, 2}}, 4, 2);
  const SplitBoundaries b{0, 1};
  EvalContext ctx(g, b, GraphKind::thg);
  auto negs = negatives_for(ctx, EvalSplit::test, SamplingStrategy::random, 1);
  Split scorer;
  const auto r = evaluate_single_step(scorer, ctx, EvalSplit::test, negs);
  ASSERT_EQ(r.per_relation.size(), 2u);
  EXPECT_EQ(r.per_relation.at(0).mrr, 1.0);
  EXPECT_EQ(r.per_relation.at(1).mrr, 0.5);  // rank 2 of 2
  EXPECT_EQ(r.mrr, 0.75);
}

TEST(SingleStep, ObservesGroundTruthBetweenSteps) {
  // recorded (timestamp, high-water at scoring time) pairs
  class Spy : public Scorer {
   public:
    std::string name() const override { return "spy"; }
    void observe(Timestamp t, std::span<const Quadruple>) override {
      EXPECT_TRUE(!last || t > *last);
      last = t;
    }
    void score(const EvalQuery& q, std::span<const NodeId>, std::span<double> out) const override {
      EXPECT_TRUE(last.has_value());
      EXPECT_LT(*last, q.timestamp);
      std::fill(out.begin(), out.end(), 0.0);
    }
    std::optional<Timestamp> last;
  };
  const auto s = synthetic(1);
  EvalContext ctx(s.graph, s.boundaries, s.kind);
  Spy spy;
  auto negs = negatives_for(ctx, EvalSplit::validation, SamplingStrategy::random, 3);
  evaluate_single_step(spy, ctx, EvalSplit::validation, negs);
  EXPECT_EQ(spy.last, s.boundaries.valid_end);
}

TEST(Reports, TablesAndJson) {
  EvalResult r;
  r.mrr = 0.5;
  r.hits = {{1, 0.25}, {10, 1.0}};
  r.queries = 4;
  r.per_relation[3] = {0.5, 4};
  r.per_timestep.push_back({7, 0.5, 4});
  std::ostringstream rel, ts;
  write_relation_table(rel, r);
  write_timestep_table(ts, r);
  EXPECT_EQ(rel.str(), "relation\tmrr\tqueries\n3\t0.5\t4\n");
  EXPECT_EQ(ts.str(), "timestamp\tmrr\tqueries\n7\t0.5\t4\n");
  const auto j = to_json(r);
  EXPECT_EQ(j["hits"]["hits@10"].get<double>(), 1.0);
}

}  // namespace
}  // namespace tkgbench
