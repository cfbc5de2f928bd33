#include <gtest/gtest.h>

#include <filesystem>

#include "srrt/config.hpp"
#include "srrt/errors.hpp"
#include "srrt/io.hpp"

using namespace srrt;

TEST(RunConfig, DefaultsSerializeEveryKey) {
  const std::string text = serialize_run_config({});
  for (const auto& k : RunConfig::keys()) EXPECT_NE(text.find(k + " = "), std::string::npos) << k;
  EXPECT_EQ(parse_run_config(text), RunConfig{});
}

TEST(RunConfig, RoundTrip) {
  RunConfig cfg;
  cfg.locking_threshold = 3;
  cfg.window_lambda = 0.125;
  cfg.tau_miss = -0.2;
  cfg.fusion_w0 = 0.7;
  cfg.fusion_wd = 0.3;
  cfg.scale_jitter = 0.1;
  cfg.categories = {RadiusCategory::SR2, RadiusCategory::SR6};
  cfg.seed = 123456789012345ULL;
  cfg.dataset = "/data/set one";
  cfg.regulator = "file:/tmp/tables";
  cfg.tracker = "oracle";
  cfg.sigma = 1.0 / 3.0;
  cfg.gamma = 4;
  const RunConfig once = parse_run_config(serialize_run_config(cfg));
  EXPECT_EQ(once, cfg);
  EXPECT_EQ(serialize_run_config(once), serialize_run_config(cfg));
}

TEST(RunConfig, CommentsAndBlankLines) {
  const RunConfig cfg = parse_run_config("# header\n\nK = 7   # trailing\n  lambda=0.5\n");
  EXPECT_EQ(cfg.locking_threshold, 7);
  EXPECT_EQ(cfg.window_lambda, 0.5);
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  RunConfig cfg;
  EXPECT_THROW(cfg.set("nope", "1"), std::invalid_argument);
  EXPECT_THROW(cfg.get("nope"), std::invalid_argument);
  EXPECT_THROW(cfg.set("K", "0"), std::invalid_argument);
  EXPECT_THROW(cfg.set("K", "two"), std::invalid_argument);
  EXPECT_THROW(cfg.set("lambda", "1.5"), std::invalid_argument);
  EXPECT_THROW(cfg.set("tau_miss", "2"), std::invalid_argument);
  EXPECT_THROW(cfg.set("temperature", "0"), std::invalid_argument);
  EXPECT_THROW(cfg.set("scale_jitter", "-0.1"), std::invalid_argument);
  EXPECT_THROW(cfg.set("gamma", "3"), std::invalid_argument);
  EXPECT_THROW(cfg.set("regulator", "deep"), std::invalid_argument);
  EXPECT_THROW(cfg.set("tracker", "kcf"), std::invalid_argument);
  EXPECT_THROW(cfg.set("categories", ""), std::invalid_argument);
  EXPECT_EQ(cfg, RunConfig{});
  cfg.set("gamma", "6");
  EXPECT_EQ(cfg.get("gamma"), "6");
}

TEST(RunConfig, ParseErrorsCarryLine) {
  try {
    parse_run_config("K = 5\nlambda = 0.2\nbogus = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_run_config("K 5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(load_run_config("/nonexistent/srrt.cfg"), IoError);
}

TEST(RunConfig, LoadFromFile) {
  const auto p = std::filesystem::temp_directory_path() / "srrt_cfg_test.cfg";
  write_text_file(p, "seed = 42\ncategories = SR2,SR8\n");
  const RunConfig cfg = load_run_config(p);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.categories, (std::vector{RadiusCategory::SR2, RadiusCategory::SR8}));
  std::filesystem::remove(p);
}

TEST(Categories, ParseAndFormat) {
  using enum RadiusCategory;
  EXPECT_EQ(parse_categories("2,4,6"), (std::vector{SR2, SR4, SR6}));
  EXPECT_EQ(parse_categories("8, 2,SR4,2"), (std::vector{SR2, SR4, SR8}));
  EXPECT_THROW(parse_categories("3"), std::invalid_argument);
  EXPECT_THROW(parse_categories(""), std::invalid_argument);
  EXPECT_EQ(format_categories({SR2, SR6}), "2,6");
}

TEST(RunConfig, MapsOntoModuleConfigs) {
  RunConfig cfg;
  cfg.set("regulator", "file:/x/y");
  cfg.set("tracker", "oracle");
  cfg.set("K", "2");
  cfg.set("lambda", "0.6");
  cfg.set("sigma", "1.5");
  cfg.set("categories", "2,4");
  const PipelineConfig p = to_pipeline_config(cfg);
  EXPECT_EQ(p.regulator, RegulatorKind::ExternalFile);
  EXPECT_EQ(p.regulator_table, "/x/y");
  EXPECT_EQ(p.tracker, TrackerKind::OracleNoisy);
  EXPECT_EQ(p.regulation.locking_threshold, 2);
  EXPECT_EQ(p.tracking.window_lambda, 0.6);
  EXPECT_EQ(p.tracking.sigma_center, 1.5);
  EXPECT_EQ(p.allowed.size(), 2u);
  cfg.set("max_frame_spread", "40");
  EXPECT_EQ(to_sampler_config(cfg).max_frame_spread, 40u);
}

TEST(SynthSpec, RoundTrip) {
  const SynthSpec s = parse_synth_spec(
      "name = jumpy\nsequences = 3\nlength = 50\nwidth = 400\nlaw = scripted\n"
      "jumps = 10:32:0;20:-16.5:8\ntexture_seed = 9\ntarget_w = 20\n");
  EXPECT_EQ(s.sequences, 3u);
  EXPECT_EQ(s.motion.name, "jumpy");
  EXPECT_EQ(s.motion.image_width, 400);
  EXPECT_EQ(s.motion.law, MotionLaw::Scripted);
  ASSERT_EQ(s.motion.jumps.size(), 2u);
  EXPECT_EQ(s.motion.jumps[1].frame, 20u);
  EXPECT_EQ(s.motion.jumps[1].dx, -16.5);
  EXPECT_EQ(s.motion.jumps[1].dy, 8.0);
  const std::string text = serialize_synth_spec(s);
  EXPECT_EQ(serialize_synth_spec(parse_synth_spec(text)), text);
  EXPECT_THROW(parse_synth_spec("law = teleport\n"), ParseError);
  EXPECT_THROW(parse_synth_spec("colour = red\n"), ParseError);
}
