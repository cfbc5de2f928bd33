#include "srrt/trainkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "srrt/errors.hpp"
#include "srrt/io.hpp"

namespace fs = std::filesystem;

namespace srrt {

RegionRect jittered_candidate(const BoundingBox& gt, const JitterParams& j) {
  if (!gt.valid()) throw std::invalid_argument("jittered_candidate: invalid ground-truth box");
  const double grow = kTrainGamma * std::exp(j.delta_s);
  const double w = gt.w * grow;
  const double h = gt.h * grow;
  const double reach = (gt.h + gt.w) / 2.0;
  return {gt.cx + reach * j.delta_cx, gt.cy + reach * j.delta_cy, w, h};
}

RadiusCategory label_category(const RegionRect& candidate, const BoundingBox& gt) {
  const BoundingBox unit{candidate.cx, candidate.cy, candidate.w / kTrainGamma, candidate.h / kTrainGamma};
  return bucketize_factor(min_required_factor(unit, gt));
}

namespace {

// Factor band (lo, hi] whose bucket is `target`. `floor` is the factor of a
// perfectly centered box; SR8 starts where the box leaves the candidate.
std::pair<double, double> factor_band(RadiusCategory target, double floor, double miss_band) {
  switch (target) {
    case RadiusCategory::SR2: return {floor, 2.0};
    case RadiusCategory::SR4: return {2.0, 4.0};
    case RadiusCategory::SR6: return {4.0, 6.0};
    case RadiusCategory::SR8: return {kTrainGamma + 2.0 * floor, kTrainGamma + 2.0 * floor + miss_band};
  }
  return {2.0, 4.0};
}

// Location jitter that puts the gt at factor `f` on a random dominant axis
// and anywhere up to `f` on the other.
JitterParams solve_location_jitter(const BoundingBox& gt, double delta_s, double f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const double reach = (gt.h + gt.w) / 2.0;
  const double unit_w = gt.w * std::exp(delta_s);
  const double unit_h = gt.h * std::exp(delta_s);
  const double off_x = std::max(f * unit_w - gt.w, 0.0) / 2.0;
  const double off_y = std::max(f * unit_h - gt.h, 0.0) / 2.0;

  double dx = 0.0;
  double dy = 0.0;
  if (coin(rng)) {
    dx = off_x;
    dy = off_y * unit(rng);
  } else {
    dx = off_x * unit(rng);
    dy = off_y;
  }
  if (coin(rng)) dx = -dx;
  if (coin(rng)) dy = -dy;
  return {delta_s, dx / reach, dy / reach};
}

struct FrameTriple {
  std::size_t z0;
  std::size_t zd;
  std::size_t candidate;
};

std::optional<FrameTriple> draw_frames(std::size_t n, const SamplerConfig& cfg, std::mt19937_64& rng) {
  const std::size_t spread = std::min(cfg.max_frame_spread, n - 1);
  if (spread < 2) return std::nullopt;
  std::uniform_int_distribution<std::size_t> cand_offset(2, spread);
  const std::size_t c = cand_offset(rng);
  std::uniform_int_distribution<std::size_t> mid(1, c - 1);
  const std::size_t d = mid(rng);
  std::bernoulli_distribution reverse(cfg.reverse_probability);
  if (reverse(rng)) return FrameTriple{n - 1, n - 1 - d, n - 1 - c};
  return FrameTriple{0, d, c};
}

}  // namespace

std::optional<TrainingSample> sample_training_pair(const Sequence& seq, std::mt19937_64& rng, RadiusCategory target,
                                                   const SamplerConfig& cfg) {
  if (seq.size() < 3 || seq.ground_truth.size() != seq.size()) return std::nullopt;
  std::uniform_real_distribution<double> scale(-cfg.scale_jitter, cfg.scale_jitter);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    const auto frames = draw_frames(seq.size(), cfg, rng);
    if (!frames) return std::nullopt;
    const BoundingBox& g0 = seq.ground_truth[frames->z0];
    const BoundingBox& gd = seq.ground_truth[frames->zd];
    const BoundingBox& gc = seq.ground_truth[frames->candidate];
    if (!g0.valid() || !gd.valid() || !gc.valid()) continue;

    const double delta_s = scale(rng);
    const auto [lo, hi] = factor_band(target, std::exp(-delta_s), cfg.miss_band);
    const double f = hi - unit(rng) * (hi - lo);  // in (lo, hi]
    const JitterParams jitter = solve_location_jitter(gc, delta_s, f, rng);
    const RegionRect rect = jittered_candidate(gc, jitter);
    if (label_category(rect, gc) != target) continue;

    TrainingSample s;
    s.label = target;
    s.sequence = seq.name;
    s.frames = {frames->z0, frames->zd, frames->candidate};
    s.jitter = jitter;
    s.gt = gc;
    s.candidate_rect = rect;
    if (cfg.with_patches) {
      s.candidate = crop_resize(seq.frame(frames->candidate), rect, kCandidateSide);
      s.z0 = make_reference_patch(seq.frame(frames->z0), g0);
      s.zd = make_reference_patch(seq.frame(frames->zd), gd);
    }
    return s;
  }
  throw SamplingFailure("no valid " + to_string(target) + " sample in sequence '" + seq.name + "' after " +
                        std::to_string(cfg.max_attempts) + " draws");
}

std::vector<TrainingSample> sample_training_set(std::span<const Sequence> dataset, std::size_t count,
                                                std::uint64_t seed, const SamplerConfig& cfg) {
  std::vector<TrainingSample> out;
  if (dataset.empty() || count == 0) return out;
  std::mt19937_64 rng(seed);
  out.reserve(count);
  std::size_t seq_index = 0;
  std::size_t misses = 0;
  while (out.size() < count) {
    const RadiusCategory target = kAllCategories[out.size() % kNumCategories];
    const Sequence& seq = dataset[seq_index++ % dataset.size()];
    auto sample = sample_training_pair(seq, rng, target, cfg);
    if (!sample) {
      if (++misses >= dataset.size()) throw SamplingFailure("no sequence in the dataset can be sampled");
      continue;
    }
    misses = 0;
    out.push_back(std::move(*sample));
  }
  return out;
}

double cross_entropy(std::span<const RegulatorOutput> probs, std::span<const RadiusCategory> labels) {
  if (probs.empty()) throw std::invalid_argument("cross_entropy: empty batch");
  if (probs.size() != labels.size()) throw std::invalid_argument("cross_entropy: batch size mismatch");
  constexpr double kFloor = 1e-12;
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    validate_output(probs[i]);
    double p = probs[i].probs[index_of(labels[i])];
    if (p < kFloor) {
      spdlog::warn("cross_entropy: probability {} at the true label of sample {} clamped to {}", p, i, kFloor);
      p = kFloor;
    }
    total -= std::log(p);
  }
  return total / static_cast<double>(probs.size());
}

namespace {

std::string patch_name(std::size_t id, const char* role) { return fmt::format("{:06d}_{}.png", id, role); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(s);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError(line, "not a number: '" + s + "'");
  return v;
}

std::size_t to_index(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError(line, "not an index: '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != header) throw ParseError(1, path.string() + ": expected header " + header);
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
  }
  return rows;
}

}  // namespace

void export_dataset(std::span<const TrainingSample> samples, const fs::path& dir) {
  fs::create_directories(dir / "patches");
  std::string index = "id,seq,frames,label,delta_s,delta_c\n";
  std::string geometry = "id,gt_cx,gt_cy,gt_w,gt_h,cand_cx,cand_cy,cand_w,cand_h\n";
  for (std::size_t id = 0; id < samples.size(); ++id) {
    const auto& s = samples[id];
    if (s.sequence.find_first_of(",\n\r") != std::string::npos) {
      throw IoError(dir / "index.csv", "sequence name '" + s.sequence + "' cannot be stored in csv");
    }
    index += fmt::format("{},{},{};{};{},{},{},{};{}\n", id, s.sequence, s.frames[0], s.frames[1], s.frames[2],
                         static_cast<int>(factor(s.label)), s.jitter.delta_s, s.jitter.delta_cx,
                         s.jitter.delta_cy);
    geometry += fmt::format("{},{},{},{},{},{},{},{},{}\n", id, s.gt.cx, s.gt.cy, s.gt.w, s.gt.h,
                            s.candidate_rect.cx, s.candidate_rect.cy, s.candidate_rect.w, s.candidate_rect.h);
    if (!s.candidate.pixels.empty()) {
      write_image(s.candidate.pixels, dir / "patches" / patch_name(id, "cand"));
      write_image(s.z0.pixels, dir / "patches" / patch_name(id, "z0"));
      write_image(s.zd.pixels, dir / "patches" / patch_name(id, "zd"));
    }
  }
  write_text_file(dir / "index.csv", index);
  write_text_file(dir / "geometry.csv", geometry);
}

std::vector<TrainingSample> import_dataset(const fs::path& dir) {
  const auto index = read_csv(dir / "index.csv", "id,seq,frames,label,delta_s,delta_c");
  const auto geometry = read_csv(dir / "geometry.csv", "id,gt_cx,gt_cy,gt_w,gt_h,cand_cx,cand_cy,cand_w,cand_h");
  if (index.size() != geometry.size()) throw IoError(dir, "index.csv and geometry.csv disagree on sample count");

  std::vector<TrainingSample> out;
  out.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::size_t line = i + 2;
    const auto& row = index[i];
    const auto& geo = geometry[i];
    if (row.size() != 6) throw ParseError(line, "index.csv: expected 6 fields");
    if (geo.size() != 9) throw ParseError(line, "geometry.csv: expected 9 fields");
    TrainingSample s;
    const std::size_t id = to_index(row[0], line);
    if (to_index(geo[0], line) != id) throw ParseError(line, "geometry.csv id does not match index.csv");
    s.sequence = row[1];
    const auto frames = split(row[2], ';');
    const auto delta_c = split(row[5], ';');
    if (frames.size() != 3 || delta_c.size() != 2) throw ParseError(line, "index.csv: malformed frames or delta_c");
    for (int k = 0; k < 3; ++k) s.frames[k] = to_index(frames[k], line);
    try {
      s.label = category_from_factor(static_cast<int>(to_index(row[3], line)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
    s.jitter = {to_double(row[4], line), to_double(delta_c[0], line), to_double(delta_c[1], line)};
    s.gt = {to_double(geo[1], line), to_double(geo[2], line), to_double(geo[3], line), to_double(geo[4], line)};
    s.candidate_rect = {to_double(geo[5], line), to_double(geo[6], line), to_double(geo[7], line),
                        to_double(geo[8], line)};
    const fs::path cand = dir / "patches" / patch_name(id, "cand");
    if (fs::exists(cand)) {
      s.candidate = {read_image(cand), s.candidate_rect};
      s.z0 = {read_image(dir / "patches" / patch_name(id, "z0")), {}};
      s.zd = {read_image(dir / "patches" / patch_name(id, "zd")), {}};
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace srrt
