#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "srrt/regulator.hpp"
#include "srrt/sequence.hpp"
#include "srrt/trackers.hpp"
#include "srrt/trajectory.hpp"

namespace srrt {

enum class RegulatorKind { Oracle, Classical, ExternalFile };

struct PipelineConfig {
  RegulatorKind regulator = RegulatorKind::Classical;
  /// Decision table for RegulatorKind::ExternalFile.
  std::filesystem::path regulator_table;
  RegulatorConfig regulation;
  TrackerKind tracker = TrackerKind::Ncc;
  TrackerConfig tracking;
  /// Categories the pipeline may use; others are clamped into this set.
  std::vector<RadiusCategory> allowed = {kAllCategories.begin(), kAllCategories.end()};
  std::uint64_t seed = 0;
};

/// `c` if allowed, else the smallest larger allowed category, else the
/// largest smaller one. Throws std::invalid_argument on an empty set.
RadiusCategory clamp_category(RadiusCategory c, const std::vector<RadiusCategory>& allowed);

std::unique_ptr<Regulator> make_regulator(const PipelineConfig& cfg);

/// Regulated tracking: per frame, regulate on the candidate region around the
/// previous box, crop at the chosen factor, track with the dedicated tracker,
/// then run the locking-state update. The initial box is the first ground
/// truth entry. Deterministic for a fixed cfg.seed (latency aside).
Trajectory srrt_track_sequence(const Sequence& seq, const PipelineConfig& cfg);

/// Same loop with the regulator replaced by a constant category.
Trajectory fixed_sr_track_sequence(const Sequence& seq, RadiusCategory gamma, const PipelineConfig& cfg);

/// The shared loop, driven by an arbitrary regulator.
Trajectory track_sequence(const Sequence& seq, const PipelineConfig& cfg, Regulator& regulator);

}  // namespace srrt
