#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "srrt/geometry.hpp"
#include "srrt/sequence.hpp"
#include "srrt/trajectory.hpp"

namespace srrt {

inline constexpr std::size_t kSuccessThresholds = 21;

/// Success rate at overlap thresholds 0.00, 0.05, ..., 1.00 (strict IoU > t).
struct SuccessCurve {
  std::array<double, kSuccessThresholds> thresholds{};
  std::array<double, kSuccessThresholds> rates{};
  double auc = 0.0;
  /// Frames whose ground truth marks the target absent; not scored.
  std::size_t skipped = 0;
};

/// Pairs predictions with ground truth frame by frame. Throws
/// std::invalid_argument on a length mismatch.
SuccessCurve success_curve(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt);
SuccessCurve success_curve(const Trajectory& traj, std::span<const BoundingBox> gt);

struct PrecisionScores {
  /// Fraction of frames with center error <= 20 px.
  double precision = 0.0;
  /// Fraction with |(dx / gt.w, dy / gt.h)| <= 0.2.
  double norm_precision = 0.0;
  std::size_t skipped = 0;
};

PrecisionScores precision_scores(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt);
PrecisionScores precision_scores(const Trajectory& traj, std::span<const BoundingBox> gt);

/// Rate of frames within each center-error threshold (pixels, or normalized
/// units when `normalized`).
std::vector<double> precision_curve(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt,
                                    std::span<const double> thresholds, bool normalized);

/// Ground truth aligned with a trajectory's frame indices.
std::vector<BoundingBox> aligned_ground_truth(const Trajectory& traj, std::span<const BoundingBox> gt);

/// Minimum search-region category over adjacent ground-truth pairs.
struct SrDistribution {
  std::array<std::size_t, kNumCategories> counts{};
  /// Adjacent pairs skipped because one box marks an absent target.
  std::size_t skipped = 0;

  std::size_t total() const;
  /// Zero when no pair was counted.
  double fraction(RadiusCategory c) const;
  SrDistribution& operator+=(const SrDistribution& other);
};

SrDistribution min_sr_distribution(std::span<const BoundingBox> gt);
/// Sequences without ground truth contribute nothing.
SrDistribution min_sr_distribution(std::span<const Sequence> dataset);

struct LatencyStats {
  double fps = 0.0;
  double median_ms = 0.0;
  double mean_ms = 0.0;
  std::size_t frames = 0;
};

/// Summary of per-frame latencies with the first `warmup` frames dropped.
LatencyStats latency_stats(std::span<const double> latencies_ms, std::size_t warmup);

/// Runs `runner` on `seq` and summarizes its recorded per-frame latencies.
/// Throws std::invalid_argument unless the trajectory is longer than warmup.
LatencyStats latency_benchmark(const std::function<Trajectory(const Sequence&)>& runner, const Sequence& seq,
                               std::size_t warmup);

}  // namespace srrt
