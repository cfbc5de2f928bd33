#include "srrt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace srrt {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("prediction/ground-truth length mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

double center_error(const BoundingBox& p, const BoundingBox& g, bool normalized) {
  const double dx = p.cx - g.cx;
  const double dy = p.cy - g.cy;
  if (normalized) return std::hypot(dx / g.w, dy / g.h);
  return std::hypot(dx, dy);
}

}  // namespace

SuccessCurve success_curve(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt) {
  require_same_length(predicted.size(), gt.size());
  SuccessCurve curve;
  for (std::size_t k = 0; k < kSuccessThresholds; ++k) curve.thresholds[k] = static_cast<double>(k) / 20.0;

  std::array<std::size_t, kSuccessThresholds> hits{};
  std::size_t scored = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt[i].valid()) {
      ++curve.skipped;
      continue;
    }
    ++scored;
    const double overlap = iou(predicted[i], gt[i]);
    for (std::size_t k = 0; k < kSuccessThresholds; ++k) {
      if (overlap > curve.thresholds[k]) ++hits[k];
    }
  }
  if (scored == 0) return curve;
  for (std::size_t k = 0; k < kSuccessThresholds; ++k) {
    curve.rates[k] = static_cast<double>(hits[k]) / static_cast<double>(scored);
  }
  curve.auc = std::accumulate(curve.rates.begin(), curve.rates.end(), 0.0) / kSuccessThresholds;
  return curve;
}

SuccessCurve success_curve(const Trajectory& traj, std::span<const BoundingBox> gt) {
  require_same_length(traj.size(), gt.size());
  const auto boxes = traj.boxes();
  return success_curve(boxes, gt);
}

PrecisionScores precision_scores(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt) {
  require_same_length(predicted.size(), gt.size());
  PrecisionScores out;
  std::size_t scored = 0;
  std::size_t p = 0;
  std::size_t pn = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!gt[i].valid()) {
      ++out.skipped;
      continue;
    }
    ++scored;
    if (center_error(predicted[i], gt[i], false) <= 20.0) ++p;
    if (center_error(predicted[i], gt[i], true) <= 0.2) ++pn;
  }
  if (scored > 0) {
    out.precision = static_cast<double>(p) / static_cast<double>(scored);
    out.norm_precision = static_cast<double>(pn) / static_cast<double>(scored);
  }
  return out;
}

PrecisionScores precision_scores(const Trajectory& traj, std::span<const BoundingBox> gt) {
  require_same_length(traj.size(), gt.size());
  const auto boxes = traj.boxes();
  return precision_scores(boxes, gt);
}

std::vector<double> precision_curve(std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt,
                                    std::span<const double> thresholds, bool normalized) {
  require_same_length(predicted.size(), gt.size());
  std::vector<double> errors;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].valid()) errors.push_back(center_error(predicted[i], gt[i], normalized));
  }
  std::vector<double> rates(thresholds.size(), 0.0);
  if (errors.empty()) return rates;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const auto n = std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= thresholds[k]; });
    rates[k] = static_cast<double>(n) / static_cast<double>(errors.size());
  }
  return rates;
}

std::vector<BoundingBox> aligned_ground_truth(const Trajectory& traj, std::span<const BoundingBox> gt) {
  std::vector<BoundingBox> out;
  out.reserve(traj.size());
  for (const auto& r : traj.records) {
    if (r.frame >= gt.size()) {
      throw std::invalid_argument("trajectory frame " + std::to_string(r.frame) + " has no ground truth");
    }
    out.push_back(gt[r.frame]);
  }
  return out;
}

std::size_t SrDistribution::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

double SrDistribution::fraction(RadiusCategory c) const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(counts[index_of(c)]) / static_cast<double>(n);
}

SrDistribution& SrDistribution::operator+=(const SrDistribution& other) {
  for (std::size_t k = 0; k < kNumCategories; ++k) counts[k] += other.counts[k];
  skipped += other.skipped;
  return *this;
}

SrDistribution min_sr_distribution(std::span<const BoundingBox> gt) {
  SrDistribution d;
  for (std::size_t t = 1; t < gt.size(); ++t) {
    if (!gt[t - 1].valid() || !gt[t].valid()) {
      ++d.skipped;
      continue;
    }
    ++d.counts[index_of(bucketize_factor(min_required_factor(gt[t - 1], gt[t])))];
  }
  return d;
}

SrDistribution min_sr_distribution(std::span<const Sequence> dataset) {
  SrDistribution d;
  for (const auto& seq : dataset) d += min_sr_distribution(seq.ground_truth);
  return d;
}

LatencyStats latency_stats(std::span<const double> latencies_ms, std::size_t warmup) {
  if (latencies_ms.size() <= warmup) {
    throw std::invalid_argument("latency benchmark needs more frames than the warmup count");
  }
  std::vector<double> v(latencies_ms.begin() + static_cast<std::ptrdiff_t>(warmup), latencies_ms.end());
  LatencyStats s;
  s.frames = v.size();
  s.mean_ms = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  s.median_ms = v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  s.fps = s.mean_ms > 0.0 ? 1000.0 / s.mean_ms : 0.0;
  return s;
}

LatencyStats latency_benchmark(const std::function<Trajectory(const Sequence&)>& runner, const Sequence& seq,
                               std::size_t warmup) {
  if (seq.size() <= warmup + 1) {
    throw std::invalid_argument("sequence '" + seq.name + "' is too short for warmup " + std::to_string(warmup));
  }
  const Trajectory traj = runner(seq);
  const auto lat = traj.latencies_ms();
  return latency_stats(lat, warmup);
}

}  // namespace srrt
