#include "srrt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "srrt/errors.hpp"

namespace srrt {

RadiusCategory clamp_category(RadiusCategory c, const std::vector<RadiusCategory>& allowed) {
  if (allowed.empty()) throw std::invalid_argument("category restriction set is empty");
  if (std::find(allowed.begin(), allowed.end(), c) != allowed.end()) return c;
  for (auto k = index_of(c) + 1; k < kNumCategories; ++k) {
    if (std::find(allowed.begin(), allowed.end(), kAllCategories[k]) != allowed.end()) return kAllCategories[k];
  }
  for (auto k = index_of(c); k-- > 0;) {
    if (std::find(allowed.begin(), allowed.end(), kAllCategories[k]) != allowed.end()) return kAllCategories[k];
  }
  return allowed.front();
}

std::unique_ptr<Regulator> make_regulator(const PipelineConfig& cfg) {
  switch (cfg.regulator) {
    case RegulatorKind::Oracle: return std::make_unique<OracleRegulator>();
    case RegulatorKind::Classical: return std::make_unique<ClassicalRegulator>(cfg.regulation);
    case RegulatorKind::ExternalFile:
      return std::make_unique<TableRegulator>(load_regulator_table(cfg.regulator_table));
  }
  throw std::invalid_argument("unknown regulator kind");
}

namespace {

TrackerResult run_tracker(const TrackerHandle& h, RadiusCategory cat, const Image& image, const BoundingBox& prev,
                          const std::optional<BoundingBox>& gt, const PipelineConfig& cfg, std::mt19937_64& rng) {
  const RegionRect rect = search_region_rect(prev, crop_factor(cat));
  if (h.kind == TrackerKind::OracleNoisy) {
    if (!gt) throw UnsupportedMode("oracle tracker requires ground truth");
    TrackerResult r = oracle_noisy_track(h, rect, prev, *gt, cfg.tracking, rng);
    r.category_used = cat;
    return r;
  }
  const Patch search = crop_resize(image, rect, h.input_side);
  const NccResult ncc = ncc_track(h, search, h.input_side / crop_factor(cat), cfg.tracking.scale_sweep);
  const ScoreMap penalized = window_penalty(ncc.scores, cfg.tracking.window_lambda);
  const std::size_t cell = penalized.argmax();
  const BoundingBox in_patch = penalized.box_at(cell);
  return {patch_to_image_coords(in_patch, rect, h.input_side), std::clamp(ncc.scores.values[cell], 0.0, 1.0),
          cat};
}

}  // namespace

Trajectory track_sequence(const Sequence& seq, const PipelineConfig& cfg, Regulator& regulator) {
  if (seq.size() < 2) throw std::invalid_argument("sequence '" + seq.name + "' needs at least 2 frames");
  const auto init = seq.gt(0);
  if (!init || !init->valid()) {
    throw std::invalid_argument("sequence '" + seq.name + "' has no valid initial box");
  }
  std::mt19937_64 rng(cfg.seed);

  const Image first = seq.frame(0);
  RegulatorState state = init_regulator_state(first, *init, cfg.regulation.locking_threshold);
  TrackerSet trackers;
  trackers.initialize(first, *init, cfg.tracker);

  Trajectory traj;
  traj.records.reserve(seq.size() - 1);
  BoundingBox prev = *init;
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const Image image = seq.frame(t);
    const auto gt = seq.gt(t);
    const auto start = std::chrono::steady_clock::now();

    const RegulationContext ctx{t, &image, prev, gt, &state};
    const RadiusCategory chosen = clamp_category(select_category(regulator.propose(ctx)), cfg.allowed);
    const TrackerResult res = run_tracker(trackers.dispatch(chosen), chosen, image, prev, gt, cfg, rng);
    // a lost target keeps the previous box
    const BoundingBox box = res.confidence > 0.0 && res.box.valid() ? res.box : prev;
    state = ldu_step(std::move(state), chosen, box, image, t);

    const auto stop = std::chrono::steady_clock::now();
    traj.records.push_back(
        {t, box, chosen, res.confidence, std::chrono::duration<double, std::milli>(stop - start).count()});
    prev = box;
  }
  return traj;
}

Trajectory srrt_track_sequence(const Sequence& seq, const PipelineConfig& cfg) {
  auto regulator = make_regulator(cfg);
  return track_sequence(seq, cfg, *regulator);
}

Trajectory fixed_sr_track_sequence(const Sequence& seq, RadiusCategory gamma, const PipelineConfig& cfg) {
  ConstantRegulator regulator(gamma);
  PipelineConfig fixed = cfg;
  fixed.allowed = {gamma};
  return track_sequence(seq, fixed, regulator);
}

}  // namespace srrt
