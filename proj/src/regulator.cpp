#include "srrt/regulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "srrt/errors.hpp"

namespace srrt {

Patch make_reference_patch(const Image& image, const BoundingBox& box) {
  return crop_resize(image, search_region_rect(box, 1.0), kReferenceSide);
}

RegulatorState init_regulator_state(const Image& image, const BoundingBox& init, int locking_threshold) {
  if (locking_threshold <= 0) throw std::invalid_argument("locking threshold must be positive");
  RegulatorState s;
  s.z0 = make_reference_patch(image, init);
  s.zd = s.z0;
  s.locking_threshold = locking_threshold;
  return s;
}

Patch make_candidate_region(const Image& image, const BoundingBox& prev) {
  return crop_resize(image, search_region_rect(prev, kCandidateGamma), kCandidateSide);
}

std::array<double, kNumCategories> category_evidence(const Patch& reference, const FeatureMap& candidate,
                                                     const RegionRect& candidate_rect,
                                                     const RegulatorConfig& cfg) {
  std::array<double, kNumCategories> evidence;
  evidence.fill(-1.0);

  // The previous box occupies kCandidateSide / kCandidateGamma pixels of the candidate.
  const double unit_px = kCandidateSide / kCandidateGamma;
  const BoundingBox prev{candidate_rect.cx, candidate_rect.cy, candidate_rect.w / kCandidateGamma,
                         candidate_rect.h / kCandidateGamma};
  const double px_to_img_x = candidate_rect.w / kCandidateSide;
  const double px_to_img_y = candidate_rect.h / kCandidateSide;
  const RegionRect whole{reference.side() / 2.0, reference.side() / 2.0, static_cast<double>(reference.side()),
                         static_cast<double>(reference.side())};
  const int stride = cfg.feature_stride;

  for (const double scale : cfg.scale_sweep) {
    const int side = static_cast<int>(std::lround(unit_px * scale));
    if (side < 32 || side > candidate.cols() * stride) continue;
    const FeatureMap ref = extract_features(crop_resize(reference.pixels, whole, side).pixels, stride);
    if (ref.rows() > candidate.rows() || ref.cols() > candidate.cols()) continue;
    const FeatureMap scores = normalized_match(ref, candidate);
    const double half_x = ref.cols() * stride / 2.0;
    const double half_y = ref.rows() * stride / 2.0;
    for (int y = 0; y < scores.rows(); ++y) {
      for (int x = 0; x < scores.cols(); ++x) {
        const double s = scores.at(0, y, x);
        const double dx = (x * stride + half_x - kCandidateSide / 2.0) * px_to_img_x;
        const double dy = (y * stride + half_y - kCandidateSide / 2.0) * px_to_img_y;
        const BoundingBox implied{prev.cx + dx, prev.cy + dy, prev.w * scale, prev.h * scale};
        const auto k = index_of(bucketize_factor(min_required_factor(prev, implied)));
        evidence[k] = std::max(evidence[k], s);
      }
    }
  }
  auto& miss = evidence[index_of(RadiusCategory::SR8)];
  miss = std::max(miss, cfg.tau_miss);
  return evidence;
}

RegulatorOutput regulate(const RegulatorState& state, const Patch& candidate, const RegulatorConfig& cfg) {
  if (!(cfg.temperature > 0.0)) throw std::invalid_argument("regulate: temperature must be positive");
  const FeatureMap cand = extract_features(candidate.pixels, cfg.feature_stride);
  const auto e0 = category_evidence(state.z0, cand, candidate.source, cfg);
  // Until the first locking update the two references are the same patch.
  const auto ed = state.zd.pixels == state.z0.pixels
                      ? e0
                      : category_evidence(state.zd, cand, candidate.source, cfg);

  std::array<double, kNumCategories> fused;
  for (std::size_t k = 0; k < kNumCategories; ++k) {
    fused[k] = (cfg.weight_initial * e0[k] + cfg.weight_dynamic * ed[k]) / cfg.temperature;
  }
  const double peak = *std::max_element(fused.begin(), fused.end());
  RegulatorOutput out;
  double total = 0.0;
  for (std::size_t k = 0; k < kNumCategories; ++k) {
    out.probs[k] = std::exp(fused[k] - peak);
    total += out.probs[k];
  }
  for (auto& p : out.probs) p /= total;
  return out;
}

RadiusCategory select_category(const RegulatorOutput& out) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumCategories; ++k) {
    if (out.probs[k] > out.probs[best]) best = k;
  }
  return kAllCategories[best];
}

RegulatorState ldu_step(RegulatorState state, RadiusCategory chosen, const BoundingBox& predicted,
                        const Image& image, std::size_t frame) {
  if (chosen != RadiusCategory::SR2) {
    state.locking_count = 0;
    return state;
  }
  if (++state.locking_count >= state.locking_threshold) {
    state.zd = make_reference_patch(image, predicted);
    state.locking_count = 0;
    state.last_update_frame = frame;
    ++state.update_count;
  }
  return state;
}

RadiusCategory oracle_regulate(const BoundingBox& prev, const std::optional<BoundingBox>& cur_gt) {
  if (!cur_gt) throw UnsupportedMode("oracle regulation requires ground truth");
  return bucketize_factor(min_required_factor(prev, *cur_gt));
}

RegulatorOutput one_hot(RadiusCategory c) {
  RegulatorOutput out;
  out.probs[index_of(c)] = 1.0;
  return out;
}

void validate_output(const RegulatorOutput& out) {
  double total = 0.0;
  for (const double p : out.probs) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("probabilities must sum to 1");
}

RegulatorTable load_regulator_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open regulator table");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header in " + path.string());
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "frame,p2,p4,p6,p8") throw ParseError(1, "expected header frame,p2,p4,p6,p8");

  RegulatorTable table;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw ParseError(line_no, "expected 5 fields");
    RegulatorOutput out;
    std::size_t frame = 0;
    try {
      std::size_t pos = 0;
      frame = std::stoull(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
      double total = 0.0;
      for (std::size_t k = 0; k < kNumCategories; ++k) {
        out.probs[k] = std::stod(fields[k + 1], &pos);
        if (pos != fields[k + 1].size()) throw std::invalid_argument(fields[k + 1]);
        if (!std::isfinite(out.probs[k]) || out.probs[k] < 0.0) throw std::invalid_argument("negative");
        total += out.probs[k];
      }
      if (!(total > 0.0)) throw std::invalid_argument("zero mass");
      for (auto& p : out.probs) p /= total;
    } catch (const std::exception&) {
      throw ParseError(line_no, "malformed regulator record '" + line + "'");
    }
    table[frame] = out;
  }
  return table;
}

void write_regulator_table(const RegulatorTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write regulator table");
  out << "frame,p2,p4,p6,p8\n";
  out.precision(17);
  for (const auto& [frame, o] : table) {
    out << frame;
    for (const double p : o.probs) out << ',' << p;
    out << '\n';
  }
  if (!out) throw IoError(path, "write failed");
}

RegulatorOutput ClassicalRegulator::propose(const RegulationContext& ctx) {
  if (ctx.image == nullptr || ctx.state == nullptr) {
    throw InvalidState("classical regulator needs the current image and regulator state");
  }
  return regulate(*ctx.state, make_candidate_region(*ctx.image, ctx.prev), cfg_);
}

RegulatorOutput OracleRegulator::propose(const RegulationContext& ctx) {
  if (ctx.ground_truth && !ctx.ground_truth->valid()) return one_hot(RadiusCategory::SR8);
  return one_hot(oracle_regulate(ctx.prev, ctx.ground_truth));
}

RegulatorOutput TableRegulator::propose(const RegulationContext& ctx) {
  const auto it = table_.find(ctx.frame);
  if (it == table_.end()) {
    throw std::invalid_argument("regulator table has no record for frame " + std::to_string(ctx.frame));
  }
  return it->second;
}

}  // namespace srrt
