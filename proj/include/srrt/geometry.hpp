#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "srrt/image.hpp"

namespace srrt {

/// Axis-aligned box in center form, pixel units.
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  static BoundingBox from_top_left(double x, double y, double w, double h) {
    return {x + w / 2.0, y + h / 2.0, w, h};
  }

  double left() const { return cx - w / 2.0; }
  double top() const { return cy - h / 2.0; }
  double right() const { return cx + w / 2.0; }
  double bottom() const { return cy + h / 2.0; }
  double area() const { return w * h; }

  /// False for absent-target markers (w or h <= 0) and non-finite values.
  bool valid() const;

  bool operator==(const BoundingBox&) const = default;
};

/// Crop rectangle in image coordinates; may extend past the image bounds.
struct RegionRect {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return cx - w / 2.0; }
  double top() const { return cy - h / 2.0; }
  double right() const { return cx + w / 2.0; }
  double bottom() const { return cy + h / 2.0; }
  double area() const { return w * h; }

  bool operator==(const RegionRect&) const = default;
};

/// Discrete search-radius factor. "SRn" is a region n^2 times the target area.
enum class RadiusCategory : int { SR2 = 0, SR4 = 1, SR6 = 2, SR8 = 3 };

inline constexpr std::size_t kNumCategories = 4;
inline constexpr std::array<RadiusCategory, kNumCategories> kAllCategories = {
    RadiusCategory::SR2, RadiusCategory::SR4, RadiusCategory::SR6, RadiusCategory::SR8};

constexpr std::size_t index_of(RadiusCategory c) { return static_cast<std::size_t>(c); }
constexpr double factor(RadiusCategory c) { return 2.0 * (static_cast<int>(c) + 1); }

/// Inverse of factor(); accepts 2, 4, 6 or 8.
RadiusCategory category_from_factor(int f);
std::string to_string(RadiusCategory c);

/// Square resampled crop together with the rectangle it was taken from.
struct Patch {
  Image pixels;
  RegionRect source;

  int side() const { return pixels.width(); }
};

enum class Interpolation { Bilinear, Nearest };

/// Region centered on `prev`, each axis scaled by gamma.
RegionRect search_region_rect(const BoundingBox& prev, double gamma);

/// Resamples `rect` of `image` to out_side x out_side. Output samples whose
/// source point lies outside the image take the per-channel image mean.
Patch crop_resize(const Image& image, const RegionRect& rect, int out_side,
                  Interpolation interp = Interpolation::Bilinear);

/// Smallest gamma with search_region_rect(prev, gamma) containing `cur`.
double min_required_factor(const BoundingBox& prev, const BoundingBox& cur);

/// (0,2] -> SR2, (2,4] -> SR4, (4,6] -> SR6, above 6 -> SR8.
RadiusCategory bucketize_factor(double gamma);

double iou(const BoundingBox& a, const BoundingBox& b);

/// Containment with a relative tolerance of 1e-12 on the rect half-extents.
bool contains(const RegionRect& rect, const BoundingBox& box);
bool contains_point(const RegionRect& rect, double x, double y);

}  // namespace srrt
