#include "srrt/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srrt {

FeatureMap::FeatureMap(int rows, int cols, int channels, double fill)
    : rows_(rows), cols_(cols), channels_(channels) {
  if (rows < 0 || cols < 0 || channels < 0) {
    throw std::invalid_argument("feature map dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(rows) * cols * channels, fill);
}

FeatureMap extract_features(const Image& patch, int stride) {
  if (stride <= 0) throw std::invalid_argument("extract_features: stride must be positive");
  if (patch.width() < 32 || patch.height() < 32) {
    throw std::invalid_argument("extract_features: patch side must be at least 32, got " +
                                std::to_string(std::min(patch.width(), patch.height())));
  }
  const Image gray = patch.to_gray();
  const int w = gray.width();
  const int h = gray.height();
  const int rows = h / stride;
  const int cols = w / stride;
  FeatureMap fm(rows, cols, kFeatureChannels);

  const auto g = gray.plane(0);
  auto px = [&](int y, int x) { return static_cast<double>(g[static_cast<std::size_t>(y) * w + x]); };
  const double cell_area = static_cast<double>(stride) * stride;
  const double bin_width = std::numbers::pi / kOrientationBins;

  for (int y = 0; y < rows * stride; ++y) {
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, h - 1);
    const int cy = y / stride;
    for (int x = 0; x < cols * stride; ++x) {
      const int xm = std::max(x - 1, 0);
      const int xp = std::min(x + 1, w - 1);
      const int cx = x / stride;
      fm.at(0, cy, cx) += px(y, x) / cell_area;

      const double gx = px(y, xp) - px(y, xm);
      const double gy = px(yp, x) - px(ym, x);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      int bin = static_cast<int>(theta / bin_width);
      if (bin >= kOrientationBins) bin = kOrientationBins - 1;
      fm.at(1 + bin, cy, cx) += mag / cell_area;
    }
  }
  return fm;
}

FeatureMap depthwise_correlate(const FeatureMap& ref, const FeatureMap& cand) {
  if (ref.channels() != cand.channels()) {
    throw std::invalid_argument("depthwise_correlate: channel mismatch");
  }
  if (ref.rows() > cand.rows() || ref.cols() > cand.cols() || ref.rows() == 0 || ref.cols() == 0) {
    throw std::invalid_argument("depthwise_correlate: reference must fit inside candidate");
  }
  const int out_rows = cand.rows() - ref.rows() + 1;
  const int out_cols = cand.cols() - ref.cols() + 1;
  FeatureMap out(out_rows, out_cols, ref.channels());
  for (int c = 0; c < ref.channels(); ++c) {
    const double* k = ref.channel(c);
    const double* src = cand.channel(c);
    double* dst = out.channel(c);
    for (int i = 0; i < ref.rows(); ++i) {
      for (int j = 0; j < ref.cols(); ++j) {
        const double kv = k[i * ref.cols() + j];
        if (kv == 0.0) continue;
        for (int y = 0; y < out_rows; ++y) {
          const double* s = src + static_cast<std::size_t>(y + i) * cand.cols() + j;
          double* d = dst + static_cast<std::size_t>(y) * out_cols;
          for (int x = 0; x < out_cols; ++x) d[x] += kv * s[x];
        }
      }
    }
  }
  return out;
}

namespace {

// Sum over every rows x cols window of each channel; output has the valid-correlation shape.
FeatureMap window_sums(const FeatureMap& m, int rows, int cols, bool squared) {
  const int out_rows = m.rows() - rows + 1;
  const int out_cols = m.cols() - cols + 1;
  FeatureMap out(out_rows, out_cols, m.channels());
  std::vector<double> integral(static_cast<std::size_t>(m.rows() + 1) * (m.cols() + 1));
  const int stride = m.cols() + 1;
  for (int c = 0; c < m.channels(); ++c) {
    std::fill(integral.begin(), integral.end(), 0.0);
    for (int y = 0; y < m.rows(); ++y) {
      double row = 0.0;
      for (int x = 0; x < m.cols(); ++x) {
        const double v = m.at(c, y, x);
        row += squared ? v * v : v;
        integral[(y + 1) * stride + x + 1] = integral[y * stride + x + 1] + row;
      }
    }
    for (int y = 0; y < out_rows; ++y) {
      for (int x = 0; x < out_cols; ++x) {
        out.at(c, y, x) = integral[(y + rows) * stride + x + cols] - integral[y * stride + x + cols] -
                          integral[(y + rows) * stride + x] + integral[y * stride + x];
      }
    }
  }
  return out;
}

}  // namespace

FeatureMap normalized_match(const FeatureMap& ref, const FeatureMap& cand) {
  // Centering each reference channel makes the window mean drop out of the
  // numerator, so the raw depthwise correlation gives the covariance directly.
  FeatureMap centered = ref;
  const double n = static_cast<double>(ref.rows()) * ref.cols();
  double ref_norm2 = 0.0;
  for (int c = 0; c < ref.channels(); ++c) {
    double* p = centered.channel(c);
    double mean = 0.0;
    for (int i = 0; i < ref.rows() * ref.cols(); ++i) mean += p[i];
    mean /= n;
    for (int i = 0; i < ref.rows() * ref.cols(); ++i) {
      p[i] -= mean;
      ref_norm2 += p[i] * p[i];
    }
  }

  const FeatureMap corr = depthwise_correlate(centered, cand);
  const FeatureMap sums = window_sums(cand, ref.rows(), ref.cols(), false);
  const FeatureMap sq = window_sums(cand, ref.rows(), ref.cols(), true);

  FeatureMap score(corr.rows(), corr.cols(), 1);
  const double ref_norm = std::sqrt(ref_norm2);
  for (int y = 0; y < corr.rows(); ++y) {
    for (int x = 0; x < corr.cols(); ++x) {
      double num = 0.0;
      double var = 0.0;
      double energy = 0.0;
      for (int c = 0; c < corr.channels(); ++c) {
        num += corr.at(c, y, x);
        const double s = sums.at(c, y, x);
        var += sq.at(c, y, x) - s * s / n;
        energy += sq.at(c, y, x);
      }
      // cancellation noise in var for flat windows is relative to the window energy
      const bool flat = var <= 1e-10 * energy || ref_norm2 <= 1e-20;
      const double v = flat ? 0.0 : num / (ref_norm * std::sqrt(var));
      score.at(0, y, x) = std::clamp(v, -1.0, 1.0);
    }
  }
  return score;
}

}  // namespace srrt
