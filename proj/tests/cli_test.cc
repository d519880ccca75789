// Copyright 2026 The gesteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include "gesteval/core_model.h"
#include "gesteval/dataset_pipeline.h"
#include "gesteval/key_value.h"
#include "gesteval/skeleton_io.h"
#include "gesteval/skeleton_mapping.h"

namespace gesteval {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("gesteval_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static int run(const std::string& args) {
    const std::string cmd = std::string(GESTEVAL_CLI_PATH) + " " + args + " 2>" +
                            (dir_ / "stderr.txt").string() + " >" +
                            (dir_ / "stdout.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static std::string read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  static void corpus() {
    if (fs::exists(dir_ / "m.gmm")) return;
    ASSERT_EQ(run("--seed 1 synth-corpus --mu 4 --out " + path("a.csv")), 0);
    ASSERT_EQ(run("--seed 2 synth-corpus --mu 4 --out " + path("b.csv")), 0);
    ASSERT_EQ(run("--seed 7 gmm-train " + path("a.csv") + " --k 24 --out " + path("m.gmm")), 0);
  }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, TrainGenerateEvaluate) {
  corpus();
  ASSERT_EQ(run("--seed 3 generate --model " + path("m.gmm") + " -n 100 --out " + path("g.csv")), 0);
  EXPECT_EQ(load_dataset(path("g.csv")).size(), 100);
  ASSERT_EQ(run("--seed 11 evaluate " + path("a.csv") + " " + path("g.csv") + " --model " +
                path("m.gmm") + " --bootstrap 5 --artifacts " + path("art") + " --out " +
                path("s1.json")),
            0);
  ASSERT_EQ(run("--seed 11 evaluate " + path("a.csv") + " " + path("g.csv") + " --model " +
                path("m.gmm") + " --bootstrap 5 --out " + path("s2.json")),
            0);
  EXPECT_EQ(read("s1.json"), read("s2.json"));
  EXPECT_NE(read("s1.json").find("\"originality\""), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "art" / "spectrum.svg"));
  EXPECT_TRUE(fs::exists(dir_ / "art" / "spectrum.csv"));
}

TEST_F(CliTest, MuMismatchExitsTwo) {
  corpus();
  ASSERT_EQ(run("--seed 1 synth-corpus --mu 6 --out " + path("a6.csv")), 0);
  EXPECT_EQ(run("evaluate " + path("a.csv") + " " + path("a6.csv")), 2);
  EXPECT_NE(read("stderr.txt").find("mu mismatch"), std::string::npos);
}

TEST_F(CliTest, BadInputExitsTwo) {
  std::ofstream(dir_ / "bad.csv") << "#mu,1\n#rate_hz,4\n1,2,3\n";
  EXPECT_EQ(run("motion-stats " + path("bad.csv")), 2);
  EXPECT_NE(read("stderr.txt").find("line 3"), std::string::npos);
  EXPECT_EQ(run("motion-stats " + path("missing.csv")), 2);
  EXPECT_EQ(run("no-such-command"), 2);
}

TEST_F(CliTest, FgdCsvFormat) {
  corpus();
  ASSERT_EQ(run("--format csv fgd --model " + path("m.gmm") + " " + path("a.csv") + " " +
                path("b.csv")),
            0);
  const std::string out = read("stdout.txt");
  EXPECT_EQ(out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(out.find("\nvalue,"), std::string::npos);
}

TEST_F(CliTest, StreamPipeline) {
  ASSERT_EQ(run("--seed 4 synth-corpus --poses 50 --out " + path("s.csv")), 0);
  ASSERT_EQ(run("--seed 5 synth-corpus --poses 40 --out " + path("t.csv")), 0);
  ASSERT_EQ(run("resample " + path("s.csv") + " --rate 2 --out " + path("s2.csv")), 0);
  EXPECT_EQ(load_pose_stream(path("s2.csv")).size(), 25);
  ASSERT_EQ(run("match-lengths " + path("s.csv") + " " + path("t.csv") + " --out-a " +
                path("ma.csv") + " --out-b " + path("mb.csv")),
            0);
  EXPECT_EQ(load_pose_stream(path("ma.csv")).size(), 40);
  ASSERT_EQ(run("window " + path("ma.csv") + " --mu 4 --out " + path("w.csv")), 0);
  EXPECT_EQ(load_dataset(path("w.csv")).size(), 10);
  ASSERT_EQ(run("motion-stats " + path("w.csv")), 0);
  EXPECT_NE(read("stdout.txt").find("\"Lhand\""), std::string::npos);
}

TEST_F(CliTest, PcoaAndProcrustes) {
  corpus();
  ASSERT_EQ(run("pcoa " + path("a.csv") + " " + path("b.csv") + " --svg " + path("p.svg") +
                " --spectrum-csv " + path("p.csv")),
            0);
  EXPECT_NE(read("stdout.txt").find("\"r2\""), std::string::npos);
  EXPECT_EQ(read("p.svg").rfind("<svg", 0), 0u);
  ASSERT_EQ(run("procrustes " + path("a.csv") + " " + path("a.csv")), 0);
  EXPECT_NE(read("stdout.txt").find("\"ss\""), std::string::npos);
  std::ofstream(dir_ / "yo.csv") << "1,2\n-1,0\n0,-2\n";
  std::ofstream(dir_ / "yg.csv") << "2,4\n-2,0\n0,-4\n";
  ASSERT_EQ(run("procrustes --coords --mu 1 " + path("yo.csv") + " " + path("yg.csv")), 0);
  EXPECT_NE(read("stdout.txt").find("\"scale\": 0.5"), std::string::npos);
  EXPECT_EQ(run("procrustes --coords " + path("yo.csv") + " " + path("yg.csv")), 2);
}

TEST_F(CliTest, MapSkeletonRecords) {
  {
    std::ofstream out(dir_ / "rec.jsonl");
    for (int i = 0; i < 8; ++i) {
      SkeletonFrame f = SkeletonFrame::empty(SkeletonLayout::kOpenPose25, 0.1 * i);
      f.set("Neck", {0, 0.5, 0});
      f.set("MidHip", {0, 0, 0});
      f.set("LShoulder", {0.15, 0.5, 0});
      f.set("RShoulder", {-0.15, 0.5, 0});
      f.set("LElbow", {0.17, 0.32, 0.02 * i});
      f.set("LWrist", {0.2, 0.2, 0.15});
      f.set("RElbow", {-0.17, 0.32, 0.02});
      f.set("RWrist", {-0.22, 0.25, 0.12});
      f.set("Nose", {0.01 * i, 0.7, 0.02});
      out << format_skeleton_record(f) << "\n";
    }
  }
  ASSERT_EQ(run("map --layout openpose --rate 4 " + path("rec.jsonl") + " " + path("mapped.csv")), 0);
  EXPECT_EQ(load_pose_stream(path("mapped.csv")).size(), 3);
  EXPECT_EQ(run("map --layout openni " + path("rec.jsonl") + " " + path("x.csv")), 2);
}

TEST(ShippedConfigTest, MatchesBuiltInDefaults) {
  const std::string dir = std::string(GESTEVAL_SOURCE_DIR) + "/config/";
  const RobotProfile builtin = RobotProfile::pepper();
  const RobotProfile shipped = RobotProfile::load(dir + "pepper.profile");
  for (int j = 0; j < kJointCount; ++j) {
    EXPECT_DOUBLE_EQ(shipped.limit(j).lo, builtin.limit(j).lo);
    EXPECT_DOUBLE_EQ(shipped.limit(j).hi, builtin.limit(j).hi);
  }
  EXPECT_DOUBLE_EQ(shipped.links().upper_arm, builtin.links().upper_arm);
  const MappingParams d = MappingParams::defaults(builtin);
  const MappingParams m =
      MappingParams::from_document(KeyValueDocument::load(dir + "mapping.params"), builtin);
  for (auto [a, b] : {std::pair{m.head_pitch, d.head_pitch}, {m.head_yaw, d.head_yaw},
                      {m.hand_yaw, d.hand_yaw}, {m.hand_open, d.hand_open}}) {
    EXPECT_DOUBLE_EQ(a.src_lo, b.src_lo);
    EXPECT_DOUBLE_EQ(a.src_hi, b.src_hi);
    EXPECT_DOUBLE_EQ(a.dst_lo, b.dst_lo);
    EXPECT_DOUBLE_EQ(a.dst_hi, b.dst_hi);
  }
  EXPECT_DOUBLE_EQ(m.max_wrist_yaw, d.max_wrist_yaw);
  EXPECT_DOUBLE_EQ(m.min_confidence, d.min_confidence);
}

}  // namespace
}  // namespace gesteval
