#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "srrt/cli.hpp"
#include "srrt/io.hpp"
#include "srrt/regulator.hpp"
#include "srrt/trainkit.hpp"

using namespace srrt;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "srrt");
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("srrt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string path(const std::string& rel) const { return (root_ / rel).string(); }

  /// Writes a spec file and renders it into `dir`.
  void synth(const std::string& spec, const std::string& dir) {
    write_text_file(path(dir + ".spec"), spec);
    const CliRun r = cli({"synth", "--spec", path(dir + ".spec"), "--output", path(dir), "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path root_;
};

const char* kMovingSpec =
    "name = mover\nsequences = 2\nlength = 30\nlaw = random_walk\nwalk_sigma = 3\nvx = 1\n"
    "start_cx = 100\ntarget_w = 28\ntarget_h = 36\n";

}  // namespace

TEST_F(CliTest, StatsOnStaticDataset) {
  synth("name = still\nsequences = 3\nlength = 12\n", "still");
  EXPECT_TRUE(fs::exists(path("still/still_001/img/00000012.png")));
  const CliRun r = cli({"stats", "--dataset", path("still"), "--output", path("stats")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["fractions"]["SR2"].get<double>(), 1.0);
  EXPECT_EQ(j["total"].get<int>(), 33);
  EXPECT_EQ(j["sequences"].get<int>(), 3);
  EXPECT_EQ(json::parse(read_text_file(path("stats/stats.json"))), j);
}

TEST_F(CliTest, OracleTrackThenEvalGivesPerfectAuc) {
  synth(kMovingSpec, "data");
  const CliRun t = cli({"track", "--dataset", path("data"), "--output", path("res"), "--regulator", "oracle",
                     "--tracker", "oracle", "--sigma", "0", "--workers", "2"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_TRUE(fs::exists(path("res/mover_000.txt")));
  EXPECT_TRUE(fs::exists(path("res/mover_001.timing.csv")));
  EXPECT_EQ(read_trajectory(path("res/mover_000.txt")).size(), 29u);

  const CliRun e = cli({"eval", "--dataset", path("data"), "--results", path("res"), "--output", path("rep")});
  ASSERT_EQ(e.code, 0) << e.err;
  const json j = json::parse(e.out);
  EXPECT_DOUBLE_EQ(j["auc"].get<double>(), 20.0 / 21.0);
  EXPECT_EQ(j["p"].get<double>(), 1.0);
  EXPECT_EQ(j["p_norm"].get<double>(), 1.0);
  const json report = json::parse(read_text_file(path("rep/report.json")));
  EXPECT_EQ(report["frames"].get<int>(), 58);
  EXPECT_TRUE(report["timing"].contains("median_ms"));
  const std::string success = read_text_file(path("rep/success.csv"));
  EXPECT_EQ(std::count(success.begin(), success.end(), '\n'), 22);
  EXPECT_TRUE(fs::exists(path("rep/precision.csv")));
  EXPECT_TRUE(fs::exists(path("rep/norm_precision.csv")));
}

TEST_F(CliTest, FixedSeedGivesByteIdenticalArtifacts) {
  synth(kMovingSpec, "data");
  auto track = [&](const std::string& out, const std::string& seed, const std::string& workers) {
    const CliRun r = cli({"track", "--dataset", path("data"), "--output", path(out), "--regulator", "oracle",
                       "--tracker", "oracle", "--sigma", "2", "--seed", seed, "--workers", workers});
    ASSERT_EQ(r.code, 0) << r.err;
  };
  track("a", "7", "1");
  track("b", "7", "3");
  track("c", "8", "1");
  for (const std::string f : {"mover_000.txt", "mover_001.txt", "mover_000.meta.json"}) {
    EXPECT_EQ(read_text_file(path("a/" + f)), read_text_file(path("b/" + f))) << f;
  }
  EXPECT_NE(read_text_file(path("a/mover_000.txt")), read_text_file(path("c/mover_000.txt")));
  // synth itself is deterministic
  synth(kMovingSpec, "data2");
  EXPECT_EQ(read_text_file(path("data/mover_001/groundtruth.txt")),
            read_text_file(path("data2/mover_001/groundtruth.txt")));
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
  synth(kMovingSpec, "data");
  write_text_file(path("run.cfg"), "regulator = oracle\ntracker = oracle\nseed = 3\ngamma = 4\n");
  const CliRun r = cli({"track", "--config", path("run.cfg"), "--dataset", path("data"), "--output", path("res"),
                     "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json meta = json::parse(read_text_file(path("res/mover_000.meta.json")));
  EXPECT_EQ(meta["config"]["seed"], "4");
  EXPECT_EQ(meta["mode"], "fixed-SR4");
  EXPECT_EQ(meta["categories"]["SR4"].get<int>(), 29);
}

TEST_F(CliTest, ExternalRegulatorTables) {
  synth(kMovingSpec, "data");
  fs::create_directories(path("tables"));
  for (const std::string name : {"mover_000", "mover_001"}) {
    RegulatorTable table;
    for (std::size_t f = 1; f < 30; ++f) table[f] = one_hot(f % 2 ? RadiusCategory::SR6 : RadiusCategory::SR4);
    write_regulator_table(table, path("tables/" + name + ".csv"));
  }
  const CliRun r = cli({"track", "--dataset", path("data"), "--output", path("res"), "--regulator",
                     "file:" + path("tables"), "--tracker", "oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["categories"]["SR6"].get<int>(), 30);
  EXPECT_EQ(j["categories"]["SR4"].get<int>(), 28);
}

TEST_F(CliTest, SampleExportsBalancedSet) {
  synth(kMovingSpec, "data");
  const CliRun r = cli({"sample", "--dataset", path("data"), "--output", path("train"), "--count", "40", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto samples = import_dataset(path("train"));
  ASSERT_EQ(samples.size(), 40u);
  std::array<int, kNumCategories> counts{};
  for (const auto& s : samples) {
    ++counts[index_of(s.label)];
    EXPECT_EQ(label_category(s.candidate_rect, s.gt), s.label);
  }
  for (const int c : counts) EXPECT_EQ(c, 10);
}

TEST_F(CliTest, BenchRowsWithSr2Fastest) {
  const CliRun r = cli({"bench", "--categories", "2,4,6", "--frames", "40", "--warmup", "5", "--output", path("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  const json j = json::parse(read_text_file(path("b/bench.json")));
  ASSERT_EQ(j["rows"].size(), 3u);
  const double sr2 = j["rows"][0]["timing"]["median_ms"];
  const double sr4 = j["rows"][1]["timing"]["median_ms"];
  const double sr6 = j["rows"][2]["timing"]["median_ms"];
  EXPECT_EQ(j["rows"][0]["config"], "SR2");
  EXPECT_LT(sr2, sr4);
  EXPECT_LT(sr2, sr6);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const CliRun none = cli({});
  EXPECT_EQ(none.code, 2);
  const CliRun unknown = cli({"dance"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({"track", "--frobnicate", "1"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, RuntimeErrorsAreSingleJsonLines) {
  const CliRun missing = cli({"stats", "--dataset", path("nope")});
  EXPECT_EQ(missing.code, 1);
  ASSERT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);
  const json j = json::parse(missing.err);
  EXPECT_EQ(j["error"], "io_error");
  EXPECT_NE(j["message"].get<std::string>().find("nope"), std::string::npos);

  const CliRun range = cli({"track", "--lambda", "2", "--dataset", path("x"), "--output", path("y")});
  EXPECT_EQ(range.code, 1);
  EXPECT_EQ(json::parse(range.err)["error"], "invalid_argument");

  write_text_file(path("bad.spec"), "length = 10\nvx = 50\n");  // leaves the canvas
  const CliRun spec = cli({"synth", "--spec", path("bad.spec"), "--output", path("s")});
  EXPECT_EQ(spec.code, 1);
  EXPECT_EQ(json::parse(spec.err)["error"], "spec_invalid");

  const CliRun needs = cli({"track", "--dataset", path("x")});
  EXPECT_EQ(json::parse(needs.err)["error"], "invalid_argument");
}
