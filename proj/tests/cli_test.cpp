#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "arstack/io.hpp"
#include "cli/cli.hpp"
#include "test_util.hpp"

namespace arstack::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "arstack");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) {
  return std::string(ARSTACK_TEST_FIXTURES) + "/" + name;
}

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto r = run_cli({"synth", "--out-dir", scene()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  std::string scene() const { return (dir_.path() / "scene").string(); }
  std::string sub(const char* name) const { return (dir_.path() / name).string(); }

  test::TempDir dir_;
};

TEST_F(CliPipeline, SynthWritesStackAndTruth) {
  EXPECT_TRUE(std::filesystem::exists(scene() + "/stack.json"));
  EXPECT_TRUE(std::filesystem::exists(scene() + "/layer_7.raw"));
  const std::string truth = read_file(scene() + "/truth.csv");
  EXPECT_EQ(truth.rfind("layer_label,x,y\n", 0), 0u);
  EXPECT_EQ(std::count(truth.begin(), truth.end(), '\n'), 26);
}

TEST_F(CliPipeline, EstimateDetectScoreSweep) {
  auto r = run_cli({"estimate", "--stack", scene() + "/stack.json", "--p", "1", "--h", "1",
                    "--out-dir", sub("est")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::filesystem::file_size(sub("est") + "/forecast.raw"), 100u * 100u * 4u);
  EXPECT_TRUE(std::filesystem::exists(sub("est") + "/coef.raw"));
  EXPECT_TRUE(std::filesystem::exists(sub("est") + "/ground.json"));

  r = run_cli({"detect", "--stack", scene() + "/stack.json", "--forecast",
               sub("est") + "/forecast.raw", "--c", "4.5", "--emit-histogram", "--out-dir",
               sub("det")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string dets = read_file(sub("det") + "/detections.csv");
  EXPECT_EQ(dets.rfind("layer_label,centroid_x,centroid_y,pixel_count,peak_value\n", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(sub("det") + "/mask_layer_7.u8"));
  EXPECT_TRUE(std::filesystem::exists(sub("det") + "/hist_layer_7.csv"));
  EXPECT_TRUE(std::filesystem::exists(sub("det") + "/thresholds.csv"));

  r = run_cli({"score", "--stack", scene() + "/stack.json", "--detections",
               sub("det") + "/detections.csv", "--truth", scene() + "/truth.csv", "--out-dir",
               sub("score")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("total"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(sub("score") + "/score.json"));

  // Scoring straight from the stack reproduces the two-step result.
  r = run_cli({"score", "--stack", scene() + "/stack.json", "--truth", scene() + "/truth.csv",
               "--c", "4.5", "--out-dir", sub("score2")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(sub("score") + "/score.csv"), read_file(sub("score2") + "/score.csv"));

  r = run_cli({"sweep", "--stack", scene() + "/stack.json", "--truth", scene() + "/truth.csv",
               "--c", "4.5,5,5.5,6,6.5", "--out-dir", sub("roc")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string roc = read_file(sub("roc") + "/roc.csv");
  EXPECT_EQ(roc.rfind("c,far_per_km2,pd\n4.5000,", 0), 0u);
  EXPECT_EQ(std::count(roc.begin(), roc.end(), '\n'), 6);
}

TEST_F(CliPipeline, ThreadCountDoesNotChangeOutputs) {
  for (const char* t : {"1", "8"}) {
    const auto r = run_cli({"detect", "--stack", scene() + "/stack.json", "--threads", t,
                            "--out-dir", sub(t)});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(read_file(sub("1") + "/detections.csv"), read_file(sub("8") + "/detections.csv"));
  EXPECT_EQ(read_file(sub("1") + "/mask_layer_7.u8"), read_file(sub("8") + "/mask_layer_7.u8"));
}

TEST_F(CliPipeline, ThreadsEnvironmentVariable) {
  ::setenv("ARSTACK_THREADS", "3", 1);
  auto r = run_cli({"estimate", "--stack", scene() + "/stack.json", "--out-dir", sub("e")});
  EXPECT_EQ(r.code, 0) << r.err;
  ::setenv("ARSTACK_THREADS", "zero", 1);
  r = run_cli({"estimate", "--stack", scene() + "/stack.json", "--out-dir", sub("e")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ARSTACK_THREADS"), std::string::npos);
  ::unsetenv("ARSTACK_THREADS");
}

TEST_F(CliPipeline, BadOrderIsReportedOnOneLine) {
  const auto r =
      run_cli({"estimate", "--stack", scene() + "/stack.json", "--p", "8", "--out-dir", sub("e")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("arstack: error: invalid-argument: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, ScoreFromCaseFixture) {
  test::TempDir dir;
  const auto r = run_cli({"score", "--rows", fixture("table1_rows.csv"), "--out-dir",
                          dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = read_file(dir.path() / "score.csv");
  EXPECT_NE(csv.find("m2p5,25,16,0.6400,6.0000,9,1.5000\n"), std::string::npos);
  EXPECT_NE(csv.find("total,200,188,0.9400,48.0000,33,0.6875\n"), std::string::npos);
  EXPECT_NE(r.out.find("0.69"), std::string::npos);
}

TEST(Cli, MissingStackIsALoadError) {
  test::TempDir dir;
  const auto r = run_cli({"estimate", "--stack", (dir.path() / "nope.json").string(),
                          "--out-dir", dir.path().string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("arstack: error: load: ", 0), 0u) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(run_cli({}).code, 0);
  EXPECT_NE(run_cli({"frobnicate"}).code, 0);
  EXPECT_NE(run_cli({"sweep", "--c", "5,4.5", "--stack", "x", "--truth", "y"}).code, 0);
  const auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("estimate"), std::string::npos);
}

}  // namespace
}  // namespace arstack::cli
