#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "srrt/geometry.hpp"
#include "srrt/trackers.hpp"

using namespace srrt;

TEST(SearchRegionRect, ScalesEachAxis) {
  EXPECT_EQ(search_region_rect({256, 256, 64, 64}, 2), (RegionRect{256, 256, 128, 128}));
  EXPECT_EQ(search_region_rect({100, 100, 20, 40}, 4), (RegionRect{100, 100, 80, 160}));
  EXPECT_EQ(search_region_rect({10, 10, 20, 20}, 6), (RegionRect{10, 10, 120, 120}));
  const auto r = search_region_rect({50, 60, 10, 30}, 3);
  EXPECT_DOUBLE_EQ(r.area(), 9 * 10 * 30);
}

TEST(SearchRegionRect, RejectsNonPositiveGamma) {
  EXPECT_THROW(search_region_rect({0, 0, 10, 10}, 0), std::invalid_argument);
  EXPECT_THROW(search_region_rect({0, 0, 10, 10}, -2), std::invalid_argument);
}

TEST(BoundingBox, TopLeftRoundTrip) {
  const auto b = BoundingBox::from_top_left(10, 20, 30, 40);
  EXPECT_EQ(b, (BoundingBox{25, 40, 30, 40}));
  EXPECT_EQ(b.left(), 10);
  EXPECT_EQ(b.top(), 20);
  EXPECT_FALSE((BoundingBox{0, 0, 0, 5}).valid());
}

TEST(RadiusCategory, FactorsAndOrder) {
  EXPECT_EQ(kAllCategories.size(), 4u);
  EXPECT_EQ(factor(RadiusCategory::SR2), 2);
  EXPECT_EQ(factor(RadiusCategory::SR8), 8);
  EXPECT_LT(RadiusCategory::SR2, RadiusCategory::SR4);
  EXPECT_LT(RadiusCategory::SR6, RadiusCategory::SR8);
  EXPECT_EQ(category_from_factor(6), RadiusCategory::SR6);
  EXPECT_THROW(category_from_factor(3), std::invalid_argument);
  EXPECT_EQ(to_string(RadiusCategory::SR4), "SR4");
}

TEST(CropResize, InteriorRectCopiesPixels) {
  Image img(512, 512, 1);
  for (int y = 0; y < 512; ++y)
    for (int x = 0; x < 512; ++x) img.at(0, y, x) = static_cast<float>((x * 7 + y * 3) % 251);
  const Patch p = crop_resize(img, {256, 256, 128, 128}, 128);
  ASSERT_EQ(p.side(), 128);
  for (int v = 0; v < 128; ++v)
    for (int u = 0; u < 128; ++u) ASSERT_EQ(p.pixels.at(0, v, u), img.at(0, 192 + v, 192 + u));
}

TEST(CropResize, ConstantImagePadsWithMean) {
  const Image img(64, 64, 3, 77.0f);
  const Patch p = crop_resize(img, {0, 0, 40, 40}, 128);
  for (int c = 0; c < 3; ++c)
    for (const float v : p.pixels.plane(c)) ASSERT_FLOAT_EQ(v, 77.0f);
}

TEST(CropResize, RejectsEmptyImage) {
  EXPECT_THROW(crop_resize(Image{}, {0, 0, 10, 10}, 16), std::invalid_argument);
}

namespace {

Image quadrant_image() {
  Image img(100, 100, 1);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) img.at(0, y, x) = x < 50 ? (y < 50 ? 10.f : 90.f) : (y < 50 ? 50.f : 200.f);
  return img;
}

}  // namespace

TEST(CropResize, PaddedFractionMatchesGeometry) {
  const Image img = quadrant_image();
  const float mean = 87.5f;  // (10 + 50 + 90 + 200) / 4, not a quadrant value
  const struct {
    RegionRect rect;
    int side;
  } cases[] = {{{0, 0, 60, 60}, 120}, {{5, -3, 50, 70}, 128}, {{98, 40, 30, 20}, 64}, {{90, 95, 44, 36}, 100}};
  for (const auto& tc : cases) {
    const Patch p = crop_resize(img, tc.rect, tc.side, Interpolation::Nearest);
    std::size_t padded = 0;
    for (const float v : p.pixels.plane(0)) padded += v == mean;
    auto overlap = [](double lo, double hi, double extent) {
      return std::max(0.0, std::min(hi, extent) - std::max(lo, 0.0)) / (hi - lo);
    };
    const double inside = overlap(tc.rect.left(), tc.rect.right(), 100) * overlap(tc.rect.top(), tc.rect.bottom(), 100);
    const double expected = (1.0 - inside) * tc.side * tc.side;
    // one pixel row and one column of slack
    EXPECT_NEAR(static_cast<double>(padded), expected, 2.0 * tc.side);
  }
}

TEST(CropResize, NearestKeepsQuadrantValues) {
  const Image img = quadrant_image();
  const Patch p = crop_resize(img, {50, 50, 100, 100}, 50, Interpolation::Nearest);
  EXPECT_EQ(p.pixels.at(0, 10, 10), 10.f);
  EXPECT_EQ(p.pixels.at(0, 10, 40), 50.f);
  EXPECT_EQ(p.pixels.at(0, 40, 10), 90.f);
  EXPECT_EQ(p.pixels.at(0, 40, 40), 200.f);
}

TEST(MinRequiredFactor, Examples) {
  EXPECT_DOUBLE_EQ(min_required_factor({100, 100, 20, 20}, {100, 100, 20, 20}), 1.0);
  EXPECT_DOUBLE_EQ(min_required_factor({100, 100, 20, 20}, {130, 100, 20, 20}), 4.0);
  EXPECT_DOUBLE_EQ(min_required_factor({100, 100, 20, 20}, {100, 200, 20, 20}), 11.0);
  EXPECT_NEAR(oracle::min_factor({100, 100, 20, 20}, {130, 100, 20, 20}), 4.0, 1e-9);
  EXPECT_NEAR(oracle::min_factor({100, 100, 20, 20}, {100, 200, 20, 20}), 11.0, 1e-9);
}

TEST(MinRequiredFactor, MatchesBruteForceAndIsTight) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0, 300), size(4, 80), shift(-120, 120);
  for (int i = 0; i < 1000; ++i) {
    const BoundingBox prev{pos(rng), pos(rng), size(rng), size(rng)};
    const BoundingBox cur{prev.cx + shift(rng), prev.cy + shift(rng), size(rng), size(rng)};
    const double g = min_required_factor(prev, cur);
    ASSERT_NEAR(g, oracle::min_factor(prev, cur), 1e-9 * g);
    ASSERT_TRUE(contains(search_region_rect(prev, g), cur));
    ASSERT_FALSE(oracle::region_contains(prev, g * (1 - 1e-6), cur));
    ASSERT_EQ(bucketize_factor(g), oracle::bucket(g));
  }
}

TEST(MinRequiredFactor, RejectsInvalidBoxes) {
  EXPECT_THROW(min_required_factor({0, 0, 0, 10}, {0, 0, 10, 10}), std::invalid_argument);
}

TEST(BucketizeFactor, EdgesBelongToSmallerBucket) {
  EXPECT_EQ(bucketize_factor(1.0), RadiusCategory::SR2);
  EXPECT_EQ(bucketize_factor(2.0), RadiusCategory::SR2);
  EXPECT_EQ(bucketize_factor(std::nextafter(2.0, 3.0)), RadiusCategory::SR4);
  EXPECT_EQ(bucketize_factor(4.0), RadiusCategory::SR4);
  EXPECT_EQ(bucketize_factor(5.2), RadiusCategory::SR6);
  EXPECT_EQ(bucketize_factor(6.0), RadiusCategory::SR6);
  EXPECT_EQ(bucketize_factor(11.0), RadiusCategory::SR8);
}

TEST(BucketizeFactor, SelfPairIsSR2) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.5, 500);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox b{d(rng), d(rng), d(rng), d(rng)};
    ASSERT_EQ(bucketize_factor(min_required_factor(b, b)), RadiusCategory::SR2);
  }
}

TEST(Iou, Examples) {
  const BoundingBox a{0, 0, 2, 2};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, {10, 10, 2, 2}), 0.0);
  EXPECT_NEAR(iou(a, {1, 0, 2, 2}), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(iou(a, {0, 0, 0, 0}), 0.0);
}

TEST(Iou, SymmetricAndBounded) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> p(0, 50), s(0.1, 30);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a{p(rng), p(rng), s(rng), s(rng)};
    const BoundingBox b{p(rng), p(rng), s(rng), s(rng)};
    ASSERT_EQ(iou(a, b), iou(b, a));
    ASSERT_GE(iou(a, b), 0.0);
    ASSERT_LE(iou(a, b), 1.0);
    ASSERT_EQ(iou(a, a), 1.0);
  }
}

TEST(CropResize, InteriorCropRoundTripsCorners) {
  const RegionRect rect{200, 150, 96, 64};
  const BoundingBox box{210, 140, 30, 20};
  const BoundingBox in_patch = image_to_patch_coords(box, rect, 128);
  const BoundingBox back = patch_to_image_coords(in_patch, rect, 128);
  EXPECT_NEAR(back.left(), box.left(), 1.0);
  EXPECT_NEAR(back.right(), box.right(), 1.0);
  EXPECT_NEAR(back.top(), box.top(), 1.0);
  EXPECT_NEAR(back.bottom(), box.bottom(), 1.0);
}
