#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "srrt/geometry.hpp"
#include "srrt/pipeline.hpp"
#include "srrt/synthetic.hpp"
#include "srrt/trainkit.hpp"

namespace srrt {

/// Every tunable of a run, stored as a flat `key = value` document.
/// Unknown keys and out-of-range values are rejected with std::invalid_argument.
struct RunConfig {
  int locking_threshold = 5;
  double window_lambda = 0.35;
  double tau_miss = 0.3;
  double fusion_w0 = 0.5;
  double fusion_wd = 0.5;
  double temperature = 1.0;
  double scale_jitter = 0.25;
  std::size_t max_frame_spread = 100;
  std::vector<RadiusCategory> categories = {kAllCategories.begin(), kAllCategories.end()};
  std::uint64_t seed = 0;
  std::string dataset;
  std::string output;
  /// "oracle", "classical" or "file:<path>".
  std::string regulator = "classical";
  /// "ncc" or "oracle".
  std::string tracker = "ncc";
  double sigma = 0.0;
  double sigma_scale = 0.0;
  /// Fixed-SR factor (2, 4, 6, 8); 0 runs the regulated pipeline.
  int gamma = 0;
  int workers = 0;
  std::size_t samples = 1000;
  std::size_t warmup = 10;

  /// Keys in serialization order.
  static const std::vector<std::string>& keys();

  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines; `#` starts a comment. Errors carry the line number.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string serialize_run_config(const RunConfig& cfg);

/// "2,4,6" -> {SR2, SR4, SR6}; duplicates removed, order ascending.
std::vector<RadiusCategory> parse_categories(std::string_view text);
std::string format_categories(const std::vector<RadiusCategory>& cats);

PipelineConfig to_pipeline_config(const RunConfig& cfg);
SamplerConfig to_sampler_config(const RunConfig& cfg);

/// Input of the `synth` subcommand: a motion spec plus how many sequences to
/// render from it. Same key = value format as RunConfig. Keys: name, sequences,
/// length, width, height, channels, target_w, target_h, start_cx, start_cy,
/// law (constant, random_walk, scripted), vx, vy, walk_sigma,
/// jumps (`frame:dx:dy;...`), texture_seed.
struct SynthSpec {
  MotionSpec motion;
  std::size_t sequences = 1;
};

SynthSpec parse_synth_spec(std::string_view text);
std::string serialize_synth_spec(const SynthSpec& spec);

}  // namespace srrt
