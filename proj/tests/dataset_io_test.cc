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

#include <algorithm>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "tkgbench/dataset_io.hpp"
#include "tkgbench/dataset_store.hpp"
#include "tkgbench/syngen.hpp"

namespace tkgbench {
namespace {

using testing::g4;

EdgeListSchema g4_schema() {
  return EdgeListSchema::from_config(
      KeyValueConfig::load(testing::data_dir() / "g4_schema.ini"));
}

TEST(ParseEdgelist, G4Fixture) {
  auto parsed = load_edgelist(testing::data_dir() / "g4.csv", g4_schema());
  EXPECT_EQ(parsed.graph.node_count(), 4u);
  EXPECT_EQ(parsed.graph.relation_count(), 2u);
  EXPECT_EQ(parsed.rows, 5u);
  EXPECT_EQ(parsed.graph, g4());
}

TEST(ParseEdgelist, HeaderOnlyIsEmpty) {
  std::istringstream in("timestamp,subject,relation,object\n");
  auto parsed = parse_edgelist(in, EdgeListSchema{});
  EXPECT_TRUE(parsed.graph.empty());
  EXPECT_EQ(parsed.nodes.size(), 0u);
  EXPECT_EQ(parsed.relations.size(), 0u);
}

TEST(ParseEdgelist, BlankObjectNamesLine) {
  std::istringstream in("timestamp,subject,relation,object\n0,a,r,b\n1,a,r,\n");
  try {
    parse_edgelist(in, EdgeListSchema{});
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseEdgelist, MalformedRows) {
  auto fails_at = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_edgelist(in, EdgeListSchema{});
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(fails_at("h\n0,a,r\n"), 2u);            // too few columns
  EXPECT_EQ(fails_at("h\n0,a,r,b\nx,a,r,b\n"), 3u);  // non-integer time
  EXPECT_EQ(fails_at("h\n0,,r,b\n"), 2u);            // missing subject
  EXPECT_EQ(fails_at("h\n0,a,,b\n"), 2u);            // missing relation
}

TEST(ParseEdgelist, StringIdsAndDuplicates) {
  std::istringstream in(
      "ts\tsrc\trel\tdst\n"
      "2020\tFrance\twins\tMatch\n"
      "2020\tFrance\twins\tMatch\n"
      "2021\tSpain\tloses\tMatch\n");
  EdgeListSchema schema;
  schema.delimiter = '\t';
  schema.granularity = Granularity::year;
  auto parsed = parse_edgelist(in, schema);
  EXPECT_EQ(parsed.rows, 3u);
  EXPECT_EQ(parsed.duplicates_removed, 1u);
  EXPECT_EQ(parsed.graph.size(), 2u);
  EXPECT_EQ(parsed.nodes.raw(0), "France");
  EXPECT_EQ(parsed.graph.granularity(), Granularity::year);
}

TEST(ParseEdgelist, NodeTypes) {
  std::istringstream in("t,s,r,o\n0,u1,uses,a1\n1,u2,uses,a2\n");
  std::istringstream types("node,type\nu1,user\nu2,user\na1,app\na2,app\nghost,app\n");
  ParseOptions options;
  options.node_types = &types;
  auto parsed = parse_edgelist(in, EdgeListSchema{}, options);
  ASSERT_TRUE(parsed.graph.node_types());
  EXPECT_EQ(parsed.graph.node_type_count(), 2u);
  const auto& nt = *parsed.graph.node_types();
  const auto app = *parsed.node_type_names->find("app");
  EXPECT_EQ(nt[*parsed.nodes.find("a1")], app);
  EXPECT_NE(nt[*parsed.nodes.find("u1")], app);

  std::istringstream in2("t,s,r,o\n0,u1,uses,a1\n");
  std::istringstream missing("u1,user\n");
  options.node_types = &missing;
  EXPECT_THROW(parse_edgelist(in2, EdgeListSchema{}, options), DataError);
}

TEST(ParseEdgelist, RoundTripThroughWriter) {
  SynthConfig c;
  c.seed = 3;
  const auto g = generate(c);
  std::ostringstream out;
  write_edgelist(out, g);
  std::istringstream in(out.str());
  auto parsed = parse_edgelist(in, EdgeListSchema{});
  // Unused nodes drop out of the vocabulary, so compare quadruples via raw ids.
  ASSERT_EQ(parsed.graph.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& a = g[i];
    const auto& b = parsed.graph[i];
    EXPECT_EQ(std::to_string(a.subject), parsed.nodes.raw(b.subject));
    EXPECT_EQ(std::to_string(a.object), parsed.nodes.raw(b.object));
    EXPECT_EQ(std::to_string(a.relation), parsed.relations.raw(b.relation));
    EXPECT_EQ(a.timestamp, b.timestamp);
  }
  std::ostringstream again;
  write_edgelist(again, parsed.graph, &parsed.nodes, &parsed.relations);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Vocabulary, NumericOrderAndSidecarRoundTrip) {
  auto v = Vocabulary::from_raw({"10", "9", "100", "9"});
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.raw(0), "9");
  EXPECT_EQ(v.raw(2), "100");
  std::stringstream ss;
  v.write(ss);
  EXPECT_EQ(Vocabulary::read(ss), v);
  auto mixed = Vocabulary::from_raw({"b", "10", "a"});
  EXPECT_EQ(mixed.raw(0), "10");
  EXPECT_EQ(mixed.raw(2), "b");
}

TEST(Schema, Validation) {
  EdgeListSchema s;
  s.object_column = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(EdgeListSchema::from_config(KeyValueConfig::parse(std::string("delimiter=;;\n"))),
               ConfigError);
  auto tab = EdgeListSchema::from_config(KeyValueConfig::parse(std::string("delimiter=tab\n")));
  EXPECT_EQ(tab.delimiter, '\t');
}

TEST(Manifest, Validation) {
  auto m = DatasetManifest::from_config(KeyValueConfig::parse(std::string(
      "name=toy\nurl=file:///tmp/x.csv\nchecksum=ABCDEF0123456789ABCDEF0123456789ABCDEF0123456789ABCDEF0123456789\n"
      "kind=tkg\nstrategy=type-aware\nq=1000\n")));
  EXPECT_EQ(m.q, 1000u);
  EXPECT_EQ(m.checksum, "abcdef0123456789abcdef0123456789abcdef0123456789abcdef0123456789");
  EXPECT_THROW(DatasetManifest::from_config(KeyValueConfig::parse(std::string(
                   "name=toy\nurl=https://example.org/x.csv\nkind=tkg\nstrategy=all\n"))),
               ConfigError);
  EXPECT_THROW(DatasetManifest::from_config(KeyValueConfig::parse(std::string(
                   "name=toy\nurl=file:///x\nchecksum=" + std::string(64, 'a') +
                   "\nkind=thg\nstrategy=node-type\nq=0\n"))),
               ConfigError);
}

TEST(ChronologicalSplit, UniformHundred) {
  std::vector<Quadruple> quads;
  for (Timestamp t = 0; t < 100; ++t) quads.push_back({0, 0, 1, t});
  TemporalMultiGraph g(quads, 2, 1);
  auto split = chronological_split(g);
  EXPECT_EQ(split.boundaries.train_end, 69);
  EXPECT_EQ(split.boundaries.valid_end, 84);
  EXPECT_EQ(split.train.size(), 70u);
  EXPECT_EQ(split.valid.size(), 15u);
  EXPECT_EQ(split.test.size(), 15u);
}

TEST(ChronologicalSplit, G4IsDegenerate) {
  EXPECT_THROW(chronological_split(g4()), SplitError);
}

TEST(ChronologicalSplit, TooFewTimestamps) {
  TemporalMultiGraph g({{0, 0, 1, 0}, {0, 0, 1, 1}}, 2, 1);
  EXPECT_THROW(chronological_split(g), SplitError);
  EXPECT_THROW(chronological_split(TemporalMultiGraph({}, 1, 1)), SplitError);
  EXPECT_THROW(chronological_split(g4(), 0.9, 0.2), ConfigError);
}

TEST(ChronologicalSplit, PartitionAndPurityOnSyntheticGraphs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthConfig c;
    c.seed = seed;
    c.timesteps = 25;
    const auto g = generate(c);
    const auto split = chronological_split(g);
    EXPECT_EQ(split.train.size() + split.valid.size() + split.test.size(), g.size());
    std::vector<Quadruple> all;
    for (const auto* part : {&split.train, &split.valid, &split.test}) {
      all.insert(all.end(), part->begin(), part->end());
    }
    EXPECT_EQ(all, std::vector<Quadruple>(g.begin(), g.end()));
    auto ts = [](const TemporalMultiGraph& p) {
      auto v = p.timestamps();
      return std::set<Timestamp>(v.begin(), v.end());
    };
    const auto a = ts(split.train), b = ts(split.valid), d = ts(split.test);
    for (auto t : b) EXPECT_FALSE(a.count(t) || d.count(t));
    for (auto t : a) EXPECT_FALSE(d.count(t));
    EXPECT_LE(*a.rbegin(), split.boundaries.train_end);
    EXPECT_GT(*b.begin(), split.boundaries.train_end);
    EXPECT_LE(*b.rbegin(), split.boundaries.valid_end);
    EXPECT_GT(*d.begin(), split.boundaries.valid_end);
    // train_end is the smallest timestamp reaching the target share.
    const auto before = g.slice(g.t_min(), split.boundaries.train_end - 1).size();
    EXPECT_LT(static_cast<double>(before), 0.70 * static_cast<double>(g.size()));
    EXPECT_GE(static_cast<double>(split.train.size()), 0.70 * static_cast<double>(g.size()));
  }
}

TEST(ApplySplit, RejectsBadBoundaries) {
  EXPECT_THROW(apply_split(g4(), {1, 1}), SplitError);
  EXPECT_THROW(apply_split(g4(), {0, 3}), SplitError);
  auto s = apply_split(g4(), testing::g4_boundaries());
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_EQ(s.valid.size(), 2u);
  EXPECT_EQ(s.test.size(), 2u);
}

TEST(StaticEdges, UnknownNodesDropped) {
  auto nodes = Vocabulary::from_raw({"a", "b"});
  std::istringstream in("s,r,o\na,capital_of,b\na,located,zzz\n");
  EdgeListSchema schema;
  schema.subject_column = 0;
  schema.relation_column = 1;
  schema.object_column = 2;
  schema.timestamp_column = 3;
  auto ctx = parse_static_edges(in, schema, nodes);
  EXPECT_EQ(ctx.graph.size(), 1u);
  EXPECT_EQ(ctx.dropped_unknown_nodes, 1u);
  EXPECT_EQ(ctx.graph[0].timestamp, kStaticTimestamp);
}

TEST(DatasetStore, SaveLoadRoundTrip) {
  testing::ScratchDir dir("store");
  SynthConfig c;
  c.node_types = 3;
  c.seed = 5;
  Dataset ds;
  ds.name = "synthetic";
  ds.kind = GraphKind::thg;
  ds.graph = generate(c);
  std::vector<std::string> raw;
  for (std::size_t i = 0; i < c.nodes; ++i) raw.push_back("n" + std::to_string(i));
  ds.nodes = Vocabulary::from_ordered(raw);
  ds.relations = Vocabulary::from_ordered({"r0", "r1", "r2", "r3"});
  ds.node_type_names = Vocabulary::from_ordered({"t0", "t1", "t2"});
  ds.boundaries = SplitBoundaries{10, 20};
  StaticContext st;
  st.relations = Vocabulary::from_ordered({"s0", "s1"});
  st.graph = TemporalMultiGraph({{0, 1, 2, kStaticTimestamp}, {3, 0, 4, kStaticTimestamp}},
                                c.nodes, 2);
  ds.static_context = st;
  save_dataset(dir.path(), ds);
  auto back = load_dataset(dir.path());
  EXPECT_EQ(back.name, ds.name);
  EXPECT_EQ(back.kind, ds.kind);
  EXPECT_EQ(back.graph, ds.graph);
  EXPECT_EQ(back.nodes, ds.nodes);
  EXPECT_EQ(back.relations, ds.relations);
  EXPECT_EQ(back.node_type_names, ds.node_type_names);
  ASSERT_TRUE(back.boundaries);
  EXPECT_EQ(back.boundaries->train_end, 10);
  ASSERT_TRUE(back.static_context);
  EXPECT_EQ(back.static_context->graph, st.graph);
  EXPECT_EQ(back.static_context->relations, st.relations);
}

}  // namespace
}  // namespace tkgbench
