#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "srrt/geometry.hpp"
#include "srrt/regulator.hpp"
#include "srrt/sequence.hpp"

namespace srrt {

/// Search radius used when cutting training candidates.
inline constexpr double kTrainGamma = 6.0;

/// Scale jitter exponent and per-axis location jitter factors.
struct JitterParams {
  double delta_s = 0.0;
  double delta_cx = 0.0;
  double delta_cy = 0.0;

  bool operator==(const JitterParams&) const = default;
};

/// Candidate size is gt size * 6 * exp(delta_s); its center moves from the
/// ground-truth center by (gt.h + gt.w) / 2 * delta_c per axis.
RegionRect jittered_candidate(const BoundingBox& gt, const JitterParams& j);

/// Category of `gt` seen from a candidate region: the minimum required factor
/// relative to a box at the candidate center with 1/6 of its size, bucketized.
RadiusCategory label_category(const RegionRect& candidate, const BoundingBox& gt);

struct SamplerConfig {
  /// delta_s is drawn from Uniform[-scale_jitter, scale_jitter].
  double scale_jitter = 0.25;
  std::size_t max_frame_spread = 100;
  int max_attempts = 1000;
  /// Probability that the triple is taken from the end of the sequence.
  double reverse_probability = 0.5;
  /// Width of the SR8 factor band beyond the fully-outside threshold.
  double miss_band = 4.0;
  /// Cut image patches; geometry-only samples skip frame decoding.
  bool with_patches = true;
};

struct TrainingSample {
  Patch candidate;
  Patch z0;
  Patch zd;
  RadiusCategory label = RadiusCategory::SR2;
  std::string sequence;
  /// Frame indices of z0, zd and the candidate.
  std::array<std::size_t, 3> frames{};
  JitterParams jitter;
  /// Ground truth in the candidate frame.
  BoundingBox gt;
  RegionRect candidate_rect;
};

/// Draws one (candidate, z0, zd, label) triple with label == target. Returns
/// nullopt when the sequence has fewer than 3 frames or no ground truth.
/// Throws SamplingFailure after cfg.max_attempts rejected draws.
std::optional<TrainingSample> sample_training_pair(const Sequence& seq, std::mt19937_64& rng,
                                                   RadiusCategory target, const SamplerConfig& cfg = {});

/// `count` samples with targets cycling SR2, SR4, SR6, SR8 and sequences
/// visited in order. Sequences that cannot be sampled are skipped.
std::vector<TrainingSample> sample_training_set(std::span<const Sequence> dataset, std::size_t count,
                                                std::uint64_t seed, const SamplerConfig& cfg = {});

/// Mean negative log-likelihood of the labels, natural log. A zero
/// probability at the label is clamped to 1e-12 and logged.
double cross_entropy(std::span<const RegulatorOutput> probs, std::span<const RadiusCategory> labels);

/// Writes `index.csv` (id,seq,frames,label,delta_s,delta_c), `geometry.csv`
/// and lossless PNG patches under `dir/patches`.
void export_dataset(std::span<const TrainingSample> samples, const std::filesystem::path& dir);
std::vector<TrainingSample> import_dataset(const std::filesystem::path& dir);

}  // namespace srrt
