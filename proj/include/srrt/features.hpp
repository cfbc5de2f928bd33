#pragma once

#include <cstddef>
#include <vector>

#include "srrt/image.hpp"

namespace srrt {

/// Dense grid of feature vectors, stored channel-major: (c * rows + y) * cols + x.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int rows, int cols, int channels, double fill = 0.0);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int channels() const noexcept { return channels_; }

  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  const double* channel(int c) const { return data_.data() + index(c, 0, 0); }
  double* channel(int c) { return data_.data() + index(c, 0, 0); }

  bool operator==(const FeatureMap&) const = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * rows_ + y) * cols_ + x;
  }

  int rows_ = 0;
  int cols_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

inline constexpr int kOrientationBins = 6;
/// Mean intensity plus one gradient-energy channel per orientation bin.
inline constexpr int kFeatureChannels = 1 + kOrientationBins;

/// Classical stand-in for a learned backbone. Each stride x stride cell of the
/// grayscale patch yields its mean intensity and the mean gradient magnitude
/// falling into each of kOrientationBins unsigned orientation bins.
/// Throws std::invalid_argument when either side is below 32 pixels.
FeatureMap extract_features(const Image& patch, int stride = 8);

/// Per-channel valid cross-correlation with `ref` as the kernel. Output is
/// (cand.rows - ref.rows + 1) x (cand.cols - ref.cols + 1) x channels.
FeatureMap depthwise_correlate(const FeatureMap& ref, const FeatureMap& cand);

/// Normalized match score of `ref` at every valid placement in `cand`: the
/// Pearson correlation of the two windows after per-channel mean removal.
/// Values lie in [-1, 1]; placements with zero variance score 0.
FeatureMap normalized_match(const FeatureMap& ref, const FeatureMap& cand);

}  // namespace srrt
