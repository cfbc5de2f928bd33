#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "srrt/sequence.hpp"

namespace srrt {

enum class MotionLaw { Constant, RandomWalk, Scripted };

/// Extra displacement applied between frame `frame - 1` and `frame`.
struct ScriptedJump {
  std::size_t frame = 0;
  double dx = 0.0;
  double dy = 0.0;
};

struct MotionSpec {
  std::string name = "synthetic";
  std::size_t length = 100;
  int image_width = 320;
  int image_height = 240;
  int channels = 3;
  double target_w = 32.0;
  double target_h = 32.0;
  /// Initial target center; negative means the image center.
  double start_cx = -1.0;
  double start_cy = -1.0;
  MotionLaw law = MotionLaw::Constant;
  /// Per-frame drift, applied under every law.
  double vx = 0.0;
  double vy = 0.0;
  /// Per-axis step deviation for MotionLaw::RandomWalk.
  double walk_sigma = 1.0;
  /// Only used by MotionLaw::Scripted.
  std::vector<ScriptedJump> jumps;
  std::uint64_t texture_seed = 0;
};

/// Ground-truth centers implied by the spec; random-walk steps come from `rng`.
/// Throws SpecInvalid if the target would leave the canvas.
std::vector<BoundingBox> synthetic_trajectory(const MotionSpec& spec, std::mt19937_64& rng);

/// Textured target over a textured background following the motion law.
/// Frames are rendered on demand and are bit-identical for equal inputs.
Sequence generate_synthetic_sequence(const MotionSpec& spec, std::mt19937_64& rng);

}  // namespace srrt
