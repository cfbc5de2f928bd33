#include "srrt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace srrt {

bool BoundingBox::valid() const {
  return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) &&
         w > 0.0 && h > 0.0;
}

RadiusCategory category_from_factor(int f) {
  switch (f) {
    case 2: return RadiusCategory::SR2;
    case 4: return RadiusCategory::SR4;
    case 6: return RadiusCategory::SR6;
    case 8: return RadiusCategory::SR8;
    default: throw std::invalid_argument("radius factor must be one of 2, 4, 6, 8");
  }
}

std::string to_string(RadiusCategory c) {
  return "SR" + std::to_string(static_cast<int>(factor(c)));
}

namespace {

void require_valid(const BoundingBox& b, const char* what) {
  if (!b.valid()) throw std::invalid_argument(std::string(what) + ": box must have w > 0 and h > 0");
}

// Source sample positions for one output axis. `inside` is false where the
// sample point falls outside [0, extent).
struct AxisSamples {
  std::vector<int> i0;
  std::vector<int> i1;
  std::vector<float> t;
  std::vector<char> inside;
};

AxisSamples axis_samples(double start, double length, int out, int extent, Interpolation interp) {
  AxisSamples s;
  s.i0.resize(out);
  s.i1.resize(out);
  s.t.resize(out);
  s.inside.resize(out);
  const double step = length / out;
  for (int u = 0; u < out; ++u) {
    const double x = start + (u + 0.5) * step;
    s.inside[u] = (x >= 0.0 && x < extent) ? 1 : 0;
    if (interp == Interpolation::Nearest) {
      const int ix = std::clamp(static_cast<int>(std::floor(x)), 0, extent - 1);
      s.i0[u] = s.i1[u] = ix;
      s.t[u] = 0.0f;
    } else {
      // pixel i has its center at i + 0.5
      const double fx = x - 0.5;
      const double fl = std::floor(fx);
      s.t[u] = static_cast<float>(fx - fl);
      s.i0[u] = std::clamp(static_cast<int>(fl), 0, extent - 1);
      s.i1[u] = std::clamp(static_cast<int>(fl) + 1, 0, extent - 1);
    }
  }
  return s;
}

}  // namespace

RegionRect search_region_rect(const BoundingBox& prev, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("search_region_rect: gamma must be positive");
  }
  require_valid(prev, "search_region_rect");
  return {prev.cx, prev.cy, gamma * prev.w, gamma * prev.h};
}

Patch crop_resize(const Image& image, const RegionRect& rect, int out_side, Interpolation interp) {
  if (image.empty()) throw std::invalid_argument("crop_resize: empty image");
  if (out_side <= 0) throw std::invalid_argument("crop_resize: out_side must be positive");
  if (!(rect.w > 0.0) || !(rect.h > 0.0)) {
    throw std::invalid_argument("crop_resize: rect must have positive size");
  }

  const auto xs = axis_samples(rect.left(), rect.w, out_side, image.width(), interp);
  const auto ys = axis_samples(rect.top(), rect.h, out_side, image.height(), interp);
  const auto means = image.channel_means();

  Patch patch{Image(out_side, out_side, image.channels()), rect};
  for (int c = 0; c < image.channels(); ++c) {
    const auto src = image.plane(c);
    auto dst = patch.pixels.plane(c);
    const auto fill = static_cast<float>(means[c]);
    const std::size_t w = image.width();
    for (int v = 0; v < out_side; ++v) {
      float* row = dst.data() + static_cast<std::size_t>(v) * out_side;
      if (!ys.inside[v]) {
        std::fill(row, row + out_side, fill);
        continue;
      }
      const float* r0 = src.data() + ys.i0[v] * w;
      const float* r1 = src.data() + ys.i1[v] * w;
      const float ty = ys.t[v];
      for (int u = 0; u < out_side; ++u) {
        if (!xs.inside[u]) {
          row[u] = fill;
          continue;
        }
        const int a = xs.i0[u];
        const int b = xs.i1[u];
        const float tx = xs.t[u];
        const float top = r0[a] + (r0[b] - r0[a]) * tx;
        const float bot = r1[a] + (r1[b] - r1[a]) * tx;
        row[u] = top + (bot - top) * ty;
      }
    }
  }
  return patch;
}

double min_required_factor(const BoundingBox& prev, const BoundingBox& cur) {
  require_valid(prev, "min_required_factor(prev)");
  require_valid(cur, "min_required_factor(cur)");
  const double gx = (2.0 * std::abs(cur.cx - prev.cx) + cur.w) / prev.w;
  const double gy = (2.0 * std::abs(cur.cy - prev.cy) + cur.h) / prev.h;
  return std::max(gx, gy);
}

RadiusCategory bucketize_factor(double gamma) {
  if (gamma <= 2.0) return RadiusCategory::SR2;
  if (gamma <= 4.0) return RadiusCategory::SR4;
  if (gamma <= 6.0) return RadiusCategory::SR6;
  return RadiusCategory::SR8;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  if (!a.valid() || !b.valid()) return 0.0;
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  // areas from the same edge differences as the overlap, so iou(a, a) == 1
  auto edge_area = [](const BoundingBox& r) { return (r.right() - r.left()) * (r.bottom() - r.top()); };
  const double inter = iw * ih;
  return std::clamp(inter / (edge_area(a) + edge_area(b) - inter), 0.0, 1.0);
}

bool contains(const RegionRect& rect, const BoundingBox& box) {
  constexpr double kRelTol = 1e-12;
  const double hx = rect.w / 2.0 * (1.0 + kRelTol);
  const double hy = rect.h / 2.0 * (1.0 + kRelTol);
  return std::abs(box.cx - rect.cx) + box.w / 2.0 <= hx &&
         std::abs(box.cy - rect.cy) + box.h / 2.0 <= hy;
}

bool contains_point(const RegionRect& rect, double x, double y) {
  return x >= rect.left() && x <= rect.right() && y >= rect.top() && y <= rect.bottom();
}

}  // namespace srrt
