#pragma once

#include <array>
#include <random>
#include <vector>

#include "srrt/geometry.hpp"

namespace srrt {

enum class TrackerKind { Ncc, OracleNoisy };

struct TrackerConfig {
  /// Weight of the cosine window mixed into the score map.
  double window_lambda = 0.35;
  std::vector<double> scale_sweep = {0.9, 1.0, 1.1};
  /// Oracle tracker noise: center jitter in pixels, size jitter relative.
  double sigma_center = 0.0;
  double sigma_scale = 0.0;
};

/// A base tracker dedicated to one search-region size.
struct TrackerHandle {
  RadiusCategory dedicated = RadiusCategory::SR2;
  int input_side = 128;
  Patch templ;
  TrackerKind kind = TrackerKind::Ncc;
};

/// Input resolution of the tracker dedicated to `c` (SR2 128, SR4 256, SR6 384).
int dedicated_input_side(RadiusCategory c);

/// Crop factor used when `c` is selected. SR8 crops at 8 and feeds H_6SR.
inline double crop_factor(RadiusCategory c) { return factor(c); }

/// The three SR-dedicated trackers of one pipeline.
class TrackerSet {
 public:
  TrackerSet() = default;

  /// Builds H_2SR, H_4SR and H_6SR from a tight crop of `init`.
  void initialize(const Image& frame, const BoundingBox& init, TrackerKind kind);
  bool initialized() const noexcept { return initialized_; }

  /// SR2 -> H_2SR, SR4 -> H_4SR, SR6 and SR8 -> H_6SR.
  /// Throws InvalidState before initialize().
  const TrackerHandle& dispatch(RadiusCategory chosen) const;

 private:
  std::array<TrackerHandle, 3> handles_;
  bool initialized_ = false;
};

/// Match scores indexed by the template center pixel in the search patch.
/// Placements not reachable by any swept template hold -1.
struct ScoreMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  /// Which swept template produced each cell (-1 where uncovered).
  std::vector<int> scale_index;
  /// Side in pixels of each swept template.
  std::vector<int> template_sides;

  double at(int y, int x) const { return values[static_cast<std::size_t>(y) * cols + x]; }
  double& at(int y, int x) { return values[static_cast<std::size_t>(y) * cols + x]; }
  /// Row-major index of the first maximum.
  std::size_t argmax() const;
  /// Square box in patch coordinates for the template stored at `cell`.
  BoundingBox box_at(std::size_t cell) const;
};

struct NccResult {
  ScoreMap scores;
  BoundingBox box;
  double confidence = 0.0;
};

/// Normalized cross-correlation of the handle's template over `search`, with
/// the template resized to target_side * s for each s in `scales`.
/// `target_side` is the size the previous target occupies in the search patch.
/// Throws std::invalid_argument if search.side() != h.input_side or no
/// swept template fits.
NccResult ncc_track(const TrackerHandle& h, const Patch& search, double target_side,
                    const std::vector<double>& scales = {0.9, 1.0, 1.1});

/// (1 - lambda) * scores + lambda * H, where H is a separable cosine window
/// peaking at the center cell and scaled to max(scores).
ScoreMap window_penalty(const ScoreMap& scores, double lambda);

BoundingBox patch_to_image_coords(const BoundingBox& box_in_patch, const RegionRect& rect, int patch_side);
BoundingBox image_to_patch_coords(const BoundingBox& box_in_image, const RegionRect& rect, int patch_side);

struct TrackerResult {
  BoundingBox box;
  double confidence = 0.0;
  RadiusCategory category_used = RadiusCategory::SR2;
};

/// Ground truth plus Gaussian noise when the ground-truth center lies inside
/// `region`; otherwise `prev` with confidence 0.
TrackerResult oracle_noisy_track(const TrackerHandle& h, const RegionRect& region, const BoundingBox& prev,
                                 const BoundingBox& gt, const TrackerConfig& cfg, std::mt19937_64& rng);

}  // namespace srrt
