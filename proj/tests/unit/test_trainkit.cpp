#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "srrt/errors.hpp"
#include "srrt/io.hpp"
#include "srrt/regulator.hpp"
#include "srrt/synthetic.hpp"
#include "srrt/trainkit.hpp"

using namespace srrt;
namespace fs = std::filesystem;

namespace {

Sequence walk_sequence(std::size_t length, std::uint64_t seed) {
  MotionSpec spec;
  spec.name = "walk" + std::to_string(seed);
  spec.length = length;
  spec.law = MotionLaw::RandomWalk;
  spec.walk_sigma = 1.5;
  spec.target_w = 24;
  spec.target_h = 30;
  spec.texture_seed = seed;
  std::mt19937_64 rng(seed);
  return generate_synthetic_sequence(spec, rng);
}

/// Label from first principles: the factor of `gt` relative to a box at the
/// candidate center with 1/6 of the candidate size.
RadiusCategory reference_label(const RegionRect& cand, const BoundingBox& gt) {
  return oracle::bucket(oracle::min_factor({cand.cx, cand.cy, cand.w / 6, cand.h / 6}, gt));
}

}  // namespace

TEST(JitteredCandidate, Examples) {
  const BoundingBox gt{100, 100, 20, 40};
  EXPECT_EQ(jittered_candidate(gt, {}), (RegionRect{100, 100, 120, 240}));
  const RegionRect doubled = jittered_candidate(gt, {std::log(2.0), 0, 0});
  EXPECT_NEAR(doubled.w, 240, 1e-12);
  EXPECT_NEAR(doubled.h, 480, 1e-12);
  const RegionRect shifted = jittered_candidate(gt, {0, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(shifted.cx, 115);
  EXPECT_DOUBLE_EQ(shifted.cy, 115);
}

TEST(JitteredCandidate, ZeroJitterMatchesInferenceCandidate) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> p(0, 500), s(1, 100);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox gt{p(rng), p(rng), s(rng), s(rng)};
    EXPECT_EQ(jittered_candidate(gt, {}), search_region_rect(gt, kCandidateGamma));
    EXPECT_EQ(label_category(jittered_candidate(gt, {}), gt), RadiusCategory::SR2);
  }
}

TEST(LabelCategory, Examples) {
  const BoundingBox gt{100, 100, 20, 20};
  EXPECT_EQ(label_category({100, 100, 120, 120}, gt), RadiusCategory::SR2);
  // unit box 20 wide at cx = 75: factor (2 * 25 + 20) / 20 = 3.5
  EXPECT_NEAR(oracle::min_factor({75, 100, 20, 20}, gt), 3.5, 1e-9);
  EXPECT_EQ(label_category({75, 100, 120, 120}, gt), RadiusCategory::SR4);
  EXPECT_EQ(label_category({300, 100, 120, 120}, gt), RadiusCategory::SR8);
}

TEST(LabelCategory, MatchesReferenceOnRandomGeometry) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> p(0, 400), s(5, 80), d(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox gt{p(rng), p(rng), s(rng), s(rng)};
    const RegionRect cand{gt.cx + d(rng), gt.cy + d(rng), 6 * s(rng), 6 * s(rng)};
    ASSERT_EQ(label_category(cand, gt), reference_label(cand, gt));
  }
}

TEST(SamplePair, EveryTargetIsReachedAndVerified) {
  const Sequence seq = walk_sequence(150, 3);
  std::mt19937_64 rng(4);
  for (const auto target : kAllCategories) {
    for (int i = 0; i < 25; ++i) {
      const auto s = sample_training_pair(seq, rng, target);
      ASSERT_TRUE(s.has_value());
      EXPECT_EQ(s->label, target);
      EXPECT_EQ(reference_label(s->candidate_rect, s->gt), target);
      EXPECT_EQ(s->gt, seq.ground_truth[s->frames[2]]);
      EXPECT_EQ(s->candidate.side(), 384);
      EXPECT_EQ(s->z0.side(), 128);
      EXPECT_EQ(s->zd.side(), 128);
      const auto [lo, hi] = std::minmax({s->frames[0], s->frames[1], s->frames[2]});
      EXPECT_LE(hi - lo, 100u);
      EXPECT_TRUE(s->frames[0] == 0 || s->frames[0] == seq.size() - 1);
      EXPECT_GT(s->frames[1], std::min(s->frames[0], s->frames[2]));
      EXPECT_LT(s->frames[1], std::max(s->frames[0], s->frames[2]));
      EXPECT_LE(std::abs(s->jitter.delta_s), 0.25);
    }
  }
}

TEST(SamplePair, StaticSequenceSR2) {
  MotionSpec spec;
  spec.length = 20;
  std::mt19937_64 g(1);
  const Sequence seq = generate_synthetic_sequence(spec, g);
  std::mt19937_64 rng(5);
  const auto s = sample_training_pair(seq, rng, RadiusCategory::SR2);
  ASSERT_TRUE(s);
  EXPECT_EQ(label_category(s->candidate_rect, s->gt), RadiusCategory::SR2);
}

TEST(SamplePair, ShortOrBrokenSequences) {
  std::mt19937_64 rng(6);
  EXPECT_FALSE(sample_training_pair(walk_sequence(2, 1), rng, RadiusCategory::SR2).has_value());
  Sequence absent = walk_sequence(10, 2);
  for (auto& b : absent.ground_truth) b = {0, 0, 0, 0};
  SamplerConfig cfg;
  cfg.max_attempts = 50;
  EXPECT_THROW(sample_training_pair(absent, rng, RadiusCategory::SR4, cfg), SamplingFailure);
}

TEST(SampleSet, RoundRobinRatioIsExact) {
  const std::vector<Sequence> data = {walk_sequence(120, 1), walk_sequence(60, 2), walk_sequence(2, 3)};
  SamplerConfig cfg;
  cfg.with_patches = false;
  const auto samples = sample_training_set(data, 400, 11, cfg);
  ASSERT_EQ(samples.size(), 400u);
  std::array<int, kNumCategories> counts{};
  for (const auto& s : samples) {
    ++counts[index_of(s.label)];
    EXPECT_EQ(reference_label(s.candidate_rect, s.gt), s.label);
    EXPECT_TRUE(s.candidate.pixels.empty());
  }
  for (const int c : counts) EXPECT_EQ(c, 100);
  const auto again = sample_training_set(data, 400, 11, cfg);
  for (std::size_t i = 0; i < samples.size(); ++i) EXPECT_EQ(again[i].candidate_rect, samples[i].candidate_rect);
}

TEST(CrossEntropy, HandComputedValues) {
  const RegulatorOutput hit = one_hot(RadiusCategory::SR6);
  const RegulatorOutput uniform{{0.25, 0.25, 0.25, 0.25}};
  const std::vector<RadiusCategory> l1 = {RadiusCategory::SR6};
  EXPECT_EQ(cross_entropy(std::vector{hit}, l1), 0.0);
  EXPECT_NEAR(cross_entropy(std::vector{uniform}, l1), 1.386294361119891, 1e-12);
  const std::vector<RadiusCategory> l2 = {RadiusCategory::SR6, RadiusCategory::SR2};
  EXPECT_NEAR(cross_entropy(std::vector{hit, uniform}, l2), 0.6931471805599453, 1e-12);
  const std::vector<RadiusCategory> miss = {RadiusCategory::SR2};
  EXPECT_NEAR(cross_entropy(std::vector{hit}, miss), -std::log(1e-12), 1e-9);
}

TEST(CrossEntropy, NonNegativeAndZeroOnlyForOneHotHits) {
  std::mt19937_64 rng(7);
  std::gamma_distribution<double> g(0.5, 1.0);
  std::uniform_int_distribution<int> cat(0, 3);
  for (int i = 0; i < 1000; ++i) {
    RegulatorOutput o;
    double sum = 0;
    for (auto& p : o.probs) sum += (p = g(rng) + 1e-9);
    for (auto& p : o.probs) p /= sum;
    const std::vector<RadiusCategory> label = {kAllCategories[cat(rng)]};
    EXPECT_GT(cross_entropy(std::vector{o}, label), 0.0);
  }
}

TEST(CrossEntropy, RejectsBadBatches) {
  const std::vector<RegulatorOutput> none;
  const std::vector<RadiusCategory> labels;
  EXPECT_THROW(cross_entropy(none, labels), std::invalid_argument);
  const std::vector<RadiusCategory> two = {RadiusCategory::SR2, RadiusCategory::SR4};
  EXPECT_THROW(cross_entropy(std::vector{one_hot(RadiusCategory::SR2)}, two), std::invalid_argument);
}

TEST(ExportDataset, RoundTrip) {
  const std::vector<Sequence> data = {walk_sequence(80, 5)};
  const auto samples = sample_training_set(data, 100, 3);
  const fs::path dir = fs::temp_directory_path() / "srrt_export_test";
  fs::remove_all(dir);
  export_dataset(samples, dir);

  const std::string index = read_text_file(dir / "index.csv");
  EXPECT_EQ(std::count(index.begin(), index.end(), '\n'), 101);
  EXPECT_EQ(index.substr(0, index.find('\n')), "id,seq,frames,label,delta_s,delta_c");

  const auto back = import_dataset(dir);
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].label, samples[i].label);
    EXPECT_EQ(back[i].frames, samples[i].frames);
    EXPECT_EQ(back[i].sequence, samples[i].sequence);
    EXPECT_EQ(back[i].jitter, samples[i].jitter);
    EXPECT_EQ(back[i].gt, samples[i].gt);
    EXPECT_EQ(back[i].candidate_rect, samples[i].candidate_rect);
    EXPECT_EQ(label_category(back[i].candidate_rect, back[i].gt), back[i].label);
    // 8-bit lossless patches: bit-exact to the rounded source values
    const Image& a = samples[i].candidate.pixels;
    const Image& b = back[i].candidate.pixels;
    ASSERT_EQ(a.width(), b.width());
    ASSERT_EQ(a.channels(), b.channels());
    for (int c = 0; c < a.channels(); ++c)
      for (std::size_t k = 0; k < a.plane(c).size(); ++k)
        ASSERT_EQ(b.plane(c)[k], std::round(std::clamp(a.plane(c)[k], 0.0f, 255.0f)));
  }
  fs::remove_all(dir);
}
