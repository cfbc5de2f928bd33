#include "srrt/trackers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <opencv2/imgproc.hpp>

#include "srrt/errors.hpp"
#include "srrt/regulator.hpp"

namespace srrt {

int dedicated_input_side(RadiusCategory c) {
  switch (c) {
    case RadiusCategory::SR2: return 128;
    case RadiusCategory::SR4: return 256;
    case RadiusCategory::SR6:
    case RadiusCategory::SR8: return 384;
  }
  return 384;
}

void TrackerSet::initialize(const Image& frame, const BoundingBox& init, TrackerKind kind) {
  const Patch templ = make_reference_patch(frame, init);
  const std::array<RadiusCategory, 3> dedicated = {RadiusCategory::SR2, RadiusCategory::SR4,
                                                   RadiusCategory::SR6};
  for (std::size_t i = 0; i < handles_.size(); ++i) {
    handles_[i] = TrackerHandle{dedicated[i], dedicated_input_side(dedicated[i]), templ, kind};
  }
  initialized_ = true;
}

const TrackerHandle& TrackerSet::dispatch(RadiusCategory chosen) const {
  if (!initialized_) throw InvalidState("tracker set used before initialization");
  switch (chosen) {
    case RadiusCategory::SR2: return handles_[0];
    case RadiusCategory::SR4: return handles_[1];
    case RadiusCategory::SR6:
    case RadiusCategory::SR8: return handles_[2];
  }
  return handles_[2];
}

std::size_t ScoreMap::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

BoundingBox ScoreMap::box_at(std::size_t cell) const {
  const int k = scale_index.at(cell);
  if (k < 0) throw std::invalid_argument("score map cell has no template placement");
  const int t = template_sides[k];
  const int cy = static_cast<int>(cell / cols);
  const int cx = static_cast<int>(cell % cols);
  const int x0 = cx - t / 2;
  const int y0 = cy - t / 2;
  return {x0 + t / 2.0, y0 + t / 2.0, static_cast<double>(t), static_cast<double>(t)};
}

NccResult ncc_track(const TrackerHandle& h, const Patch& search, double target_side,
                    const std::vector<double>& scales) {
  if (search.side() != h.input_side) {
    throw std::invalid_argument("ncc_track: search side " + std::to_string(search.side()) +
                                " does not match tracker input " + std::to_string(h.input_side));
  }
  if (!(target_side > 0.0)) throw std::invalid_argument("ncc_track: target side must be positive");
  if (h.templ.pixels.empty()) throw std::invalid_argument("ncc_track: empty template");

  const int side = search.side();
  const Image search_gray = search.pixels.to_gray();
  const Image templ_gray = h.templ.pixels.to_gray();
  const cv::Mat search_mat(side, side, CV_32F, const_cast<float*>(search_gray.plane(0).data()));
  const RegionRect whole{templ_gray.width() / 2.0, templ_gray.height() / 2.0,
                         static_cast<double>(templ_gray.width()), static_cast<double>(templ_gray.height())};

  ScoreMap map;
  map.rows = side;
  map.cols = side;
  map.values.assign(static_cast<std::size_t>(side) * side, -1.0);
  map.scale_index.assign(map.values.size(), -1);

  for (const double s : scales) {
    const int t = static_cast<int>(std::lround(target_side * s));
    if (t < 4 || t > side) continue;
    const Patch resized = crop_resize(templ_gray, whole, t);
    const cv::Mat templ_mat(t, t, CV_32F, const_cast<float*>(resized.pixels.plane(0).data()));
    cv::Mat response;
    cv::matchTemplate(search_mat, templ_mat, response, cv::TM_CCOEFF_NORMED);
    const int k = static_cast<int>(map.template_sides.size());
    map.template_sides.push_back(t);
    for (int y0 = 0; y0 < response.rows; ++y0) {
      const float* r = response.ptr<float>(y0);
      for (int x0 = 0; x0 < response.cols; ++x0) {
        const double v = std::isfinite(r[x0]) ? std::clamp(static_cast<double>(r[x0]), -1.0, 1.0) : 0.0;
        const std::size_t cell = static_cast<std::size_t>(y0 + t / 2) * side + (x0 + t / 2);
        if (v > map.values[cell] || map.scale_index[cell] < 0) {
          map.values[cell] = v;
          map.scale_index[cell] = k;
        }
      }
    }
  }
  if (map.template_sides.empty()) {
    throw std::invalid_argument("ncc_track: no swept template fits the search patch");
  }

  NccResult result;
  const std::size_t best = map.argmax();
  result.box = map.box_at(best);
  result.confidence = std::clamp(map.values[best], 0.0, 1.0);
  result.scores = std::move(map);
  return result;
}

namespace {

// Cosine window over n cells, 1 at cell n / 2 and positive everywhere.
std::vector<double> cosine_window(int n) {
  std::vector<double> w(n);
  const int center = n / 2;
  const double radius = n / 2 + 1.0;
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 + std::cos(std::numbers::pi * (i - center) / radius));
  }
  return w;
}

}  // namespace

ScoreMap window_penalty(const ScoreMap& scores, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("window_penalty: lambda must lie in [0, 1]");
  }
  if (scores.values.empty()) return scores;
  ScoreMap out = scores;
  if (lambda == 0.0) return out;
  const double peak = *std::max_element(scores.values.begin(), scores.values.end());
  // a non-positive peak would invert the window; fall back to unit height
  const double height = peak > 0.0 ? peak : 1.0;
  const auto wy = cosine_window(scores.rows);
  const auto wx = cosine_window(scores.cols);
  for (int y = 0; y < scores.rows; ++y) {
    for (int x = 0; x < scores.cols; ++x) {
      out.at(y, x) = (1.0 - lambda) * scores.at(y, x) + lambda * height * wy[y] * wx[x];
    }
  }
  return out;
}

BoundingBox patch_to_image_coords(const BoundingBox& b, const RegionRect& rect, int patch_side) {
  if (patch_side <= 0) throw std::invalid_argument("patch_side must be positive");
  const double sx = rect.w / patch_side;
  const double sy = rect.h / patch_side;
  return {rect.left() + b.cx * sx, rect.top() + b.cy * sy, b.w * sx, b.h * sy};
}

BoundingBox image_to_patch_coords(const BoundingBox& b, const RegionRect& rect, int patch_side) {
  if (patch_side <= 0) throw std::invalid_argument("patch_side must be positive");
  const double sx = patch_side / rect.w;
  const double sy = patch_side / rect.h;
  return {(b.cx - rect.left()) * sx, (b.cy - rect.top()) * sy, b.w * sx, b.h * sy};
}

TrackerResult oracle_noisy_track(const TrackerHandle& h, const RegionRect& region, const BoundingBox& prev,
                                 const BoundingBox& gt, const TrackerConfig& cfg, std::mt19937_64& rng) {
  if (!gt.valid() || !contains_point(region, gt.cx, gt.cy)) {
    return {prev, 0.0, h.dedicated};
  }
  BoundingBox box = gt;
  if (cfg.sigma_center > 0.0) {
    std::normal_distribution<double> center(0.0, cfg.sigma_center);
    box.cx += center(rng);
    box.cy += center(rng);
  }
  if (cfg.sigma_scale > 0.0) {
    std::normal_distribution<double> size(0.0, cfg.sigma_scale);
    box.w *= std::max(1.0 + size(rng), 0.1);
    box.h *= std::max(1.0 + size(rng), 0.1);
  }
  return {box, 1.0, h.dedicated};
}

}  // namespace srrt
