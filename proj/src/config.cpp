#include "srrt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "srrt/errors.hpp"
#include "srrt/io.hpp"

namespace srrt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw std::invalid_argument(fmt::format("config key '{}': invalid value '{}' ({})", key, value, why));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v, "not a number");
  return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "not an integer");
  return out;
}

double in_range(std::string_view key, std::string_view v, double lo, double hi) {
  const double d = to_double(key, v);
  if (d < lo || d > hi) bad_value(key, v, fmt::format("must lie in [{}, {}]", lo, hi));
  return d;
}

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = {
      {"K",
       {[](RunConfig& c, std::string_view v) {
          const int k = to_int<int>("K", v);
          if (k < 1) bad_value("K", v, "must be >= 1");
          c.locking_threshold = k;
        },
        [](const RunConfig& c) { return fmt::format("{}", c.locking_threshold); }}},
      {"lambda",
       {[](RunConfig& c, std::string_view v) { c.window_lambda = in_range("lambda", v, 0.0, 1.0); },
        [](const RunConfig& c) { return fmt::format("{}", c.window_lambda); }}},
      {"tau_miss",
       {[](RunConfig& c, std::string_view v) { c.tau_miss = in_range("tau_miss", v, -1.0, 1.0); },
        [](const RunConfig& c) { return fmt::format("{}", c.tau_miss); }}},
      {"fusion_w0",
       {[](RunConfig& c, std::string_view v) { c.fusion_w0 = in_range("fusion_w0", v, 0.0, 1e6); },
        [](const RunConfig& c) { return fmt::format("{}", c.fusion_w0); }}},
      {"fusion_wd",
       {[](RunConfig& c, std::string_view v) { c.fusion_wd = in_range("fusion_wd", v, 0.0, 1e6); },
        [](const RunConfig& c) { return fmt::format("{}", c.fusion_wd); }}},
      {"temperature",
       {[](RunConfig& c, std::string_view v) {
          const double t = to_double("temperature", v);
          if (!(t > 0.0)) bad_value("temperature", v, "must be > 0");
          c.temperature = t;
        },
        [](const RunConfig& c) { return fmt::format("{}", c.temperature); }}},
      {"scale_jitter",
       {[](RunConfig& c, std::string_view v) { c.scale_jitter = in_range("scale_jitter", v, 0.0, 2.0); },
        [](const RunConfig& c) { return fmt::format("{}", c.scale_jitter); }}},
      {"max_frame_spread",
       {[](RunConfig& c, std::string_view v) {
          const auto n = to_int<std::size_t>("max_frame_spread", v);
          if (n < 2) bad_value("max_frame_spread", v, "must be >= 2");
          c.max_frame_spread = n;
        },
        [](const RunConfig& c) { return fmt::format("{}", c.max_frame_spread); }}},
      {"categories",
       {[](RunConfig& c, std::string_view v) {
          try {
            c.categories = parse_categories(v);
          } catch (const std::invalid_argument& e) {
            bad_value("categories", v, e.what());
          }
        },
        [](const RunConfig& c) { return format_categories(c.categories); }}},
      {"seed",
       {[](RunConfig& c, std::string_view v) { c.seed = to_int<std::uint64_t>("seed", v); },
        [](const RunConfig& c) { return fmt::format("{}", c.seed); }}},
      {"dataset",
       {[](RunConfig& c, std::string_view v) { c.dataset = std::string(v); },
        [](const RunConfig& c) { return c.dataset; }}},
      {"output",
       {[](RunConfig& c, std::string_view v) { c.output = std::string(v); },
        [](const RunConfig& c) { return c.output; }}},
      {"regulator",
       {[](RunConfig& c, std::string_view v) {
          if (v != "oracle" && v != "classical" && !(v.starts_with("file:") && v.size() > 5)) {
            bad_value("regulator", v, "expected oracle, classical or file:<path>");
          }
          c.regulator = std::string(v);
        },
        [](const RunConfig& c) { return c.regulator; }}},
      {"tracker",
       {[](RunConfig& c, std::string_view v) {
          if (v != "ncc" && v != "oracle") bad_value("tracker", v, "expected ncc or oracle");
          c.tracker = std::string(v);
        },
        [](const RunConfig& c) { return c.tracker; }}},
      {"sigma",
       {[](RunConfig& c, std::string_view v) { c.sigma = in_range("sigma", v, 0.0, 1e6); },
        [](const RunConfig& c) { return fmt::format("{}", c.sigma); }}},
      {"sigma_scale",
       {[](RunConfig& c, std::string_view v) { c.sigma_scale = in_range("sigma_scale", v, 0.0, 1.0); },
        [](const RunConfig& c) { return fmt::format("{}", c.sigma_scale); }}},
      {"gamma",
       {[](RunConfig& c, std::string_view v) {
          const int g = to_int<int>("gamma", v);
          if (g != 0 && g != 2 && g != 4 && g != 6 && g != 8) bad_value("gamma", v, "expected 0, 2, 4, 6 or 8");
          c.gamma = g;
        },
        [](const RunConfig& c) { return fmt::format("{}", c.gamma); }}},
      {"workers",
       {[](RunConfig& c, std::string_view v) {
          const int n = to_int<int>("workers", v);
          if (n < 0) bad_value("workers", v, "must be >= 0");
          c.workers = n;
        },
        [](const RunConfig& c) { return fmt::format("{}", c.workers); }}},
      {"samples",
       {[](RunConfig& c, std::string_view v) {
          const auto n = to_int<std::size_t>("samples", v);
          if (n < 1) bad_value("samples", v, "must be >= 1");
          c.samples = n;
        },
        [](const RunConfig& c) { return fmt::format("{}", c.samples); }}},
      {"warmup",
       {[](RunConfig& c, std::string_view v) { c.warmup = to_int<std::size_t>("warmup", v); },
        [](const RunConfig& c) { return fmt::format("{}", c.warmup); }}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> order = {
      "K",       "lambda", "tau_miss", "fusion_w0", "fusion_wd", "temperature", "scale_jitter",
      "max_frame_spread", "categories", "seed", "dataset", "output", "regulator", "tracker",
      "sigma",   "sigma_scale", "gamma", "workers", "samples", "warmup"};
  return order;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
  it->second.set(*this, trim(value));
}

std::string RunConfig::get(std::string_view key) const {
  const auto it = fields().find(key);
  if (it == fields().end()) throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
  return it->second.get(*this);
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
      try {
        cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  try {
    return parse_run_config(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& key : RunConfig::keys()) out += key + " = " + cfg.get(key) + "\n";
  return out;
}

std::vector<RadiusCategory> parse_categories(std::string_view text) {
  std::vector<RadiusCategory> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = trim(text.substr(start, end - start));
    if (item.starts_with("SR") || item.starts_with("sr")) item.remove_prefix(2);
    int f = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), f);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw std::invalid_argument("bad category '" + std::string(item) + "'");
    }
    out.push_back(category_from_factor(f));
    if (end == text.size()) break;
    start = end + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw std::invalid_argument("category set is empty");
  return out;
}

std::string format_categories(const std::vector<RadiusCategory>& cats) {
  std::string out;
  for (const auto c : cats) {
    if (!out.empty()) out += ',';
    out += std::to_string(static_cast<int>(factor(c)));
  }
  return out;
}

PipelineConfig to_pipeline_config(const RunConfig& cfg) {
  PipelineConfig p;
  if (cfg.regulator == "oracle") {
    p.regulator = RegulatorKind::Oracle;
  } else if (cfg.regulator == "classical") {
    p.regulator = RegulatorKind::Classical;
  } else {
    p.regulator = RegulatorKind::ExternalFile;
    p.regulator_table = cfg.regulator.substr(5);
  }
  p.regulation.locking_threshold = cfg.locking_threshold;
  p.regulation.tau_miss = cfg.tau_miss;
  p.regulation.weight_initial = cfg.fusion_w0;
  p.regulation.weight_dynamic = cfg.fusion_wd;
  p.regulation.temperature = cfg.temperature;
  p.tracker = cfg.tracker == "oracle" ? TrackerKind::OracleNoisy : TrackerKind::Ncc;
  p.tracking.window_lambda = cfg.window_lambda;
  p.tracking.sigma_center = cfg.sigma;
  p.tracking.sigma_scale = cfg.sigma_scale;
  p.allowed = cfg.categories;
  p.seed = cfg.seed;
  return p;
}

SamplerConfig to_sampler_config(const RunConfig& cfg) {
  SamplerConfig s;
  s.scale_jitter = cfg.scale_jitter;
  s.max_frame_spread = cfg.max_frame_spread;
  return s;
}

}  // namespace srrt

namespace srrt {

namespace {

MotionLaw parse_law(std::string_view v) {
  if (v == "constant") return MotionLaw::Constant;
  if (v == "random_walk") return MotionLaw::RandomWalk;
  if (v == "scripted") return MotionLaw::Scripted;
  bad_value("law", v, "expected constant, random_walk or scripted");
}

std::string_view law_name(MotionLaw law) {
  switch (law) {
    case MotionLaw::Constant: return "constant";
    case MotionLaw::RandomWalk: return "random_walk";
    case MotionLaw::Scripted: return "scripted";
  }
  return "constant";
}

std::vector<ScriptedJump> parse_jumps(std::string_view v) {
  std::vector<ScriptedJump> out;
  std::size_t start = 0;
  while (start < v.size()) {
    std::size_t end = v.find(';', start);
    if (end == std::string_view::npos) end = v.size();
    const std::string_view item = trim(v.substr(start, end - start));
    start = end + 1;
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) bad_value("jumps", item, "expected frame:dx:dy");
    ScriptedJump j;
    j.frame = to_int<std::size_t>("jumps", trim(item.substr(0, c1)));
    j.dx = to_double("jumps", trim(item.substr(c1 + 1, c2 - c1 - 1)));
    j.dy = to_double("jumps", trim(item.substr(c2 + 1)));
    if (j.frame == 0) bad_value("jumps", item, "jump frame must be >= 1");
    out.push_back(j);
  }
  return out;
}

void set_synth(SynthSpec& s, std::string_view key, std::string_view v) {
  MotionSpec& m = s.motion;
  auto positive_int = [&](int& dst) {
    dst = to_int<int>(key, v);
    if (dst < 1) bad_value(key, v, "must be >= 1");
  };
  auto positive = [&](double& dst) {
    dst = to_double(key, v);
    if (!(dst > 0.0)) bad_value(key, v, "must be > 0");
  };
  if (key == "name") {
    if (v.empty() || v.find('/') != std::string_view::npos) bad_value(key, v, "must be a plain file name");
    m.name = std::string(v);
  } else if (key == "sequences") {
    s.sequences = to_int<std::size_t>(key, v);
    if (s.sequences < 1) bad_value(key, v, "must be >= 1");
  } else if (key == "length") {
    m.length = to_int<std::size_t>(key, v);
    if (m.length < 1) bad_value(key, v, "must be >= 1");
  } else if (key == "width") {
    positive_int(m.image_width);
  } else if (key == "height") {
    positive_int(m.image_height);
  } else if (key == "channels") {
    m.channels = to_int<int>(key, v);
    if (m.channels != 1 && m.channels != 3) bad_value(key, v, "expected 1 or 3");
  } else if (key == "target_w") {
    positive(m.target_w);
  } else if (key == "target_h") {
    positive(m.target_h);
  } else if (key == "start_cx") {
    m.start_cx = to_double(key, v);
  } else if (key == "start_cy") {
    m.start_cy = to_double(key, v);
  } else if (key == "law") {
    m.law = parse_law(v);
  } else if (key == "vx") {
    m.vx = to_double(key, v);
  } else if (key == "vy") {
    m.vy = to_double(key, v);
  } else if (key == "walk_sigma") {
    m.walk_sigma = to_double(key, v);
    if (m.walk_sigma < 0.0) bad_value(key, v, "must be >= 0");
  } else if (key == "jumps") {
    m.jumps = parse_jumps(v);
  } else if (key == "texture_seed") {
    m.texture_seed = to_int<std::uint64_t>(key, v);
  } else {
    throw std::invalid_argument(fmt::format("unknown synth key '{}'", key));
  }
}

}  // namespace

SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec spec;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
      try {
        set_synth(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return spec;
}

std::string serialize_synth_spec(const SynthSpec& spec) {
  const MotionSpec& m = spec.motion;
  std::string jumps;
  for (const auto& j : m.jumps) {
    if (!jumps.empty()) jumps += ';';
    jumps += fmt::format("{}:{}:{}", j.frame, j.dx, j.dy);
  }
  return fmt::format(
      "name = {}\nsequences = {}\nlength = {}\nwidth = {}\nheight = {}\nchannels = {}\n"
      "target_w = {}\ntarget_h = {}\nstart_cx = {}\nstart_cy = {}\nlaw = {}\nvx = {}\nvy = {}\n"
      "walk_sigma = {}\njumps = {}\ntexture_seed = {}\n",
      m.name, spec.sequences, m.length, m.image_width, m.image_height, m.channels, m.target_w, m.target_h,
      m.start_cx, m.start_cy, law_name(m.law), m.vx, m.vy, m.walk_sigma, jumps, m.texture_seed);
}

}  // namespace srrt
