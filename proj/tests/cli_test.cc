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
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"
#include "test_util.hpp"

namespace tkgbench {
namespace {

using json = nlohmann::ordered_json;
using testing::data_dir;
using testing::ScratchDir;
using testing::slurp;
using testing::spit;

int cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd =
      std::string(TKGBENCH_CLI) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

class CliTest : public ::testing::Test {
 protected:
  ScratchDir dir{"cli"};
  std::string p(const std::string& name) const { return (dir / name).string(); }
  int run(const std::string& args) { return cli(args, dir / "log.txt"); }
  std::string log() const { return slurp(dir / "log.txt"); }
};

TEST_F(CliTest, G4StatsThroughIngest) {
  ASSERT_EQ(run("ingest --edgelist " + (data_dir() / "g4.csv").string() + " --schema " +
                (data_dir() / "g4_schema.ini").string() + " --name g4 --out-dir " + p("g4")),
            0)
      << log();
  spit(dir / "split.ini", "train_end=0\nvalid_end=1\n");
  ASSERT_EQ(run("stats --dataset " + p("g4") + " --split " + p("split.ini") + " --out-dir " +
                p("stats")),
            0)
      << log();
  const auto s = read_json(dir / "stats" / "stats.json");
  EXPECT_EQ(s["quadruples"], 5);
  EXPECT_EQ(s["timesteps"], 3);
  EXPECT_DOUBLE_EQ(s["recurrency"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(s["direct_recurrency"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(s["consecutiveness"].get<double>(), 1.5);
  EXPECT_TRUE(std::filesystem::exists(dir / "stats" / "relation_histogram.tsv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "stats" / "edges_over_time.tsv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "stats" / "manifest.json"));
}

TEST_F(CliTest, DefaultSplitOnG4IsRejectedAsDataError) {
  ASSERT_EQ(run("ingest --edgelist " + (data_dir() / "g4.csv").string() + " --schema " +
                (data_dir() / "g4_schema.ini").string() + " --out-dir " + p("g4")),
            0);
  EXPECT_EQ(run("split --dataset " + p("g4") + " --out-dir " + p("split")), 3) << log();
}

TEST_F(CliTest, PipelineOracleAndReplay) {
  ASSERT_EQ(run("synth --config " + (data_dir() / "synth_tkg.ini").string() + " --out-dir " +
                p("ds")),
            0)
      << log();
  ASSERT_EQ(run("split --dataset " + p("ds") + " --out-dir " + p("ds")), 0) << log();
  ASSERT_EQ(run("negatives --dataset " + p("ds") +
                " --strategy random --q 7 --seed 5 --threads 3 --out-dir " + p("negs")),
            0)
      << log();
  ASSERT_EQ(run("eval --dataset " + p("ds") + " --negatives " + p("negs") +
                " --scorer oracle --out-dir " + p("oracle")),
            0)
      << log();
  const auto oracle = read_json(dir / "oracle" / "eval.json");
  EXPECT_EQ(oracle["mrr"].get<double>(), 1.0);
  EXPECT_GT(oracle["queries"].get<std::uint64_t>(), 0u);

  ASSERT_EQ(run("eval --dataset " + p("ds") + " --negatives " + p("negs") +
                " --scorer recb-train --threads 2 --out-dir " + p("recb")),
            0)
      << log();
  EXPECT_TRUE(std::filesystem::exists(dir / "recb" / "grid.tsv"));
  const auto manifest = read_json(dir / "recb" / "manifest.json");
  EXPECT_EQ(manifest["command"], "eval");
  EXPECT_TRUE(manifest["outputs"].contains("eval.json"));
  EXPECT_FALSE(manifest["inputs"].empty());

  ASSERT_EQ(run("replay --manifest " + p("recb/manifest.json") + " --out-dir " + p("replayed")),
            0)
      << log();
  EXPECT_EQ(slurp(dir / "recb" / "eval.json"), slurp(dir / "replayed" / "eval.json"));

  ASSERT_EQ(run("report --results " + p("oracle") + " " + p("recb") + " --out-dir " + p("rep")),
            0)
      << log();
  EXPECT_NE(slurp(dir / "rep" / "report.tsv").find("recb-train"), std::string::npos);
}

TEST_F(CliTest, ReplayDetectsChangedInputs) {
  ASSERT_EQ(run("synth --config " + (data_dir() / "synth_tkg.ini").string() + " --out-dir " +
                p("ds")),
            0);
  ASSERT_EQ(run("stats --dataset " + p("ds") + " --out-dir " + p("stats")), 0) << log();
  std::ofstream(dir / "ds" / "edges.csv", std::ios::app) << "39,0,1,2\n";
  EXPECT_EQ(run("replay --manifest " + p("stats/manifest.json") + " --out-dir " + p("again")), 5)
      << log();
}

TEST_F(CliTest, NegativesAreIdenticalAcrossThreadCounts) {
  ASSERT_EQ(run("synth --config " + (data_dir() / "synth_thg.ini").string() + " --out-dir " +
                p("ds")),
            0);
  for (const char* threads : {"1", "4"}) {
    ASSERT_EQ(run("negatives --dataset " + p("ds") + " --strategy node-type --q 4 --seed 9" +
                  " --threads " + threads + " --out-dir " + p(std::string("n") + threads)),
              0)
        << log();
  }
  EXPECT_EQ(slurp(dir / "n1" / "negatives_test.bin"), slurp(dir / "n4" / "negatives_test.bin"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("stats --bogus"), 2);
  EXPECT_EQ(run("negatives --dataset " + p("missing") + " --out-dir " + p("x")), 3);
  spit(dir / "bad.ini", "nodes=0\n");
  EXPECT_EQ(run("synth --config " + p("bad.ini") + " --out-dir " + p("y")), 2);

  ASSERT_EQ(run("synth --config " + (data_dir() / "synth_tkg.ini").string() + " --out-dir " +
                p("ds")),
            0);
  ASSERT_EQ(run("negatives --dataset " + p("ds") + " --strategy random --q 3 --out-dir " +
                p("negs")),
            0);
  // Negatives generated for a different cut do not cover the queries.
  spit(dir / "other.ini", "train_end=10\nvalid_end=20\n");
  EXPECT_EQ(run("eval --dataset " + p("ds") + " --split " + p("other.ini") + " --negatives " +
                p("negs") + " --scorer constant --out-dir " + p("e")),
            4)
      << log();

  auto bytes = slurp(dir / "negs" / "negatives_test.bin");
  bytes[bytes.size() / 2] ^= 0x5a;
  spit(dir / "negs" / "negatives_test.bin", bytes);
  EXPECT_EQ(run("eval --dataset " + p("ds") + " --negatives " + p("negs") +
                " --scorer constant --out-dir " + p("f")),
            5)
      << log();
}

TEST_F(CliTest, FetchFromFileUrl) {
  spit(dir / "payload.csv", "0,0,0,1\n");
  spit(dir / "m.ini",
       "name=tiny\nurl=file://" + p("payload.csv") +
           "\nchecksum=" + "0000000000000000000000000000000000000000000000000000000000000000\n");
  const std::string env = "TKGBENCH_CACHE=" + p("cache") + " ";
  const int status = std::system((env + TKGBENCH_CLI + " fetch --manifest " + p("m.ini") +
                                  " --out-dir " + p("f") + " >/dev/null 2>&1")
                                     .c_str());
  EXPECT_EQ(WEXITSTATUS(status), 5);
}

}  // namespace
}  // namespace tkgbench
