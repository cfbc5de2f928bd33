#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "srrt/features.hpp"
#include "srrt/geometry.hpp"

namespace srrt {

struct RegulatorConfig {
  /// Consecutive smallest-region frames that count as target-locking.
  int locking_threshold = 5;
  /// Best match score below which the target is treated as missing (SR8).
  double tau_miss = 0.3;
  double weight_initial = 0.5;
  double weight_dynamic = 0.5;
  double temperature = 1.0;
  int feature_stride = 8;
  std::vector<double> scale_sweep = {0.8, 1.0, 1.25};
};

inline constexpr int kReferenceSide = 128;
inline constexpr int kCandidateSide = 384;
inline constexpr double kCandidateGamma = 6.0;

/// Reference patches and locking counter of one tracked sequence.
struct RegulatorState {
  Patch z0;
  Patch zd;
  int locking_count = 0;
  int locking_threshold = 5;
  std::optional<std::size_t> last_update_frame;
  std::size_t update_count = 0;
};

/// Probability per RadiusCategory, indexed by index_of().
struct RegulatorOutput {
  std::array<double, kNumCategories> probs{};
};

/// Tight (gamma = 1) crop of `box` resampled to the reference size.
Patch make_reference_patch(const Image& image, const BoundingBox& box);

/// Frame-0 state: both references cut from the initial box.
RegulatorState init_regulator_state(const Image& image, const BoundingBox& init, int locking_threshold);

/// crop_resize(image, search_region_rect(prev, 6), 384).
Patch make_candidate_region(const Image& image, const BoundingBox& prev);

/// Per-category evidence from matching one reference against the candidate.
/// The best match in each scale of the sweep implies a box; its minimum
/// required factor relative to the previous box picks the category. SR8
/// evidence is floored at tau_miss.
std::array<double, kNumCategories> category_evidence(const Patch& reference, const FeatureMap& candidate,
                                                     const RegionRect& candidate_rect,
                                                     const RegulatorConfig& cfg);

/// Dual-reference regulation: weighted fusion of the z0 and zd evidence,
/// then a softmax with cfg.temperature.
RegulatorOutput regulate(const RegulatorState& state, const Patch& candidate, const RegulatorConfig& cfg = {});

/// Argmax; ties go to the smaller category.
RadiusCategory select_category(const RegulatorOutput& out);

/// Locking-state determined update of the dynamic reference.
RegulatorState ldu_step(RegulatorState state, RadiusCategory chosen, const BoundingBox& predicted,
                        const Image& image, std::size_t frame);

/// Ground-truth regulation; throws UnsupportedMode when `cur_gt` is absent.
RadiusCategory oracle_regulate(const BoundingBox& prev, const std::optional<BoundingBox>& cur_gt);

RegulatorOutput one_hot(RadiusCategory c);
/// Throws std::invalid_argument unless all entries are finite, non-negative and sum to 1 within 1e-6.
void validate_output(const RegulatorOutput& out);

/// Externally produced decisions: header `frame,p2,p4,p6,p8`, one record per frame.
using RegulatorTable = std::map<std::size_t, RegulatorOutput>;
RegulatorTable load_regulator_table(const std::filesystem::path& path);
void write_regulator_table(const RegulatorTable& table, const std::filesystem::path& path);

/// Everything a regulator may look at when choosing the category for a frame.
struct RegulationContext {
  std::size_t frame = 0;
  const Image* image = nullptr;
  BoundingBox prev;
  std::optional<BoundingBox> ground_truth;
  const RegulatorState* state = nullptr;
};

class Regulator {
 public:
  virtual ~Regulator() = default;
  virtual RegulatorOutput propose(const RegulationContext& ctx) = 0;
};

class ClassicalRegulator final : public Regulator {
 public:
  explicit ClassicalRegulator(RegulatorConfig cfg) : cfg_(std::move(cfg)) {}
  RegulatorOutput propose(const RegulationContext& ctx) override;

 private:
  RegulatorConfig cfg_;
};

/// One-hot on the ground-truth category. A frame whose ground truth marks the
/// target absent gets SR8.
class OracleRegulator final : public Regulator {
 public:
  RegulatorOutput propose(const RegulationContext& ctx) override;
};

class TableRegulator final : public Regulator {
 public:
  explicit TableRegulator(RegulatorTable table) : table_(std::move(table)) {}
  RegulatorOutput propose(const RegulationContext& ctx) override;

 private:
  RegulatorTable table_;
};

class ConstantRegulator final : public Regulator {
 public:
  explicit ConstantRegulator(RadiusCategory c) : category_(c) {}
  RegulatorOutput propose(const RegulationContext&) override { return one_hot(category_); }

 private:
  RadiusCategory category_;
};

}  // namespace srrt
