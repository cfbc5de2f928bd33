#include "srrt/cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "srrt/config.hpp"
#include "srrt/errors.hpp"
#include "srrt/io.hpp"
#include "srrt/logging.hpp"
#include "srrt/metrics.hpp"
#include "srrt/pipeline.hpp"
#include "srrt/synthetic.hpp"
#include "srrt/trainkit.hpp"

namespace srrt {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Flags collected for one invocation; applied over the config file.
struct Invocation {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string results;
  std::string spec;
  std::size_t bench_frames = 300;
  bool bench_srrt = false;
};

int worker_count(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(0..n-1) on up to `workers` threads. The exception of the lowest
/// failing index is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

/// FNV-1a, so per-sequence seeds do not depend on the standard library.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t sequence_seed(std::uint64_t seed, const std::string& name) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(name_hash(name)), static_cast<std::uint32_t>(name_hash(name) >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw std::invalid_argument(fmt::format("{} is required", flag));
}

ordered_json category_object(const std::array<std::size_t, kNumCategories>& counts) {
  ordered_json j = ordered_json::object();
  for (const auto c : kAllCategories) j[to_string(c)] = counts[index_of(c)];
  return j;
}

ordered_json timing_json(const LatencyStats& s) {
  return {{"fps", s.fps}, {"median_ms", s.median_ms}, {"mean_ms", s.mean_ms}, {"frames", s.frames}};
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- track

int cmd_track(const RunConfig& cfg, std::ostream& out) {
  require(cfg.dataset, "--dataset");
  require(cfg.output, "--output");
  const auto dataset = load_dataset(cfg.dataset);
  fs::create_directories(cfg.output);
  const PipelineConfig base = to_pipeline_config(cfg);
  std::vector<std::array<std::size_t, kNumCategories>> usage(dataset.size());

  parallel_for(dataset.size(), worker_count(cfg), [&](std::size_t i) {
    const Sequence& seq = dataset[i];
    PipelineConfig pcfg = base;
    pcfg.seed = sequence_seed(cfg.seed, seq.name);
    if (pcfg.regulator == RegulatorKind::ExternalFile && fs::is_directory(pcfg.regulator_table)) {
      pcfg.regulator_table /= seq.name + ".csv";
    }
    const Trajectory traj = cfg.gamma != 0 ? fixed_sr_track_sequence(seq, category_from_factor(cfg.gamma), pcfg)
                                           : srrt_track_sequence(seq, pcfg);
    const fs::path dir(cfg.output);
    write_trajectory(traj, dir / (seq.name + ".txt"), false);
    std::string timing = "frame,latency_ms\n";
    for (const auto& r : traj.records) timing += fmt::format("{},{}\n", r.frame, r.latency_ms);
    write_text_file(dir / (seq.name + ".timing.csv"), timing);

    auto& counts = usage[i];
    for (const auto& r : traj.records) ++counts[index_of(r.category)];
    ordered_json meta;
    meta["sequence"] = seq.name;
    meta["frames"] = seq.size();
    meta["mode"] = cfg.gamma != 0 ? fmt::format("fixed-SR{}", cfg.gamma) : std::string("srrt");
    meta["seed"] = pcfg.seed;
    meta["categories"] = category_object(counts);
    ordered_json config = ordered_json::object();
    // output location and worker count do not affect the trajectory
    for (const auto& key : RunConfig::keys()) {
      if (key != "output" && key != "workers") config[key] = cfg.get(key);
    }
    meta["config"] = config;
    write_text_file(dir / (seq.name + ".meta.json"), json_text(meta));
  });

  ordered_json summary;
  summary["sequences"] = dataset.size();
  std::array<std::size_t, kNumCategories> total{};
  for (const auto& u : usage) {
    for (std::size_t k = 0; k < kNumCategories; ++k) total[k] += u[k];
  }
  summary["categories"] = category_object(total);
  out << summary.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct SequenceEval {
  std::string name;
  std::size_t frames = 0;
  SuccessCurve success;
  PrecisionScores precision;
  std::vector<double> precision_px;
  std::vector<double> precision_norm;
  std::array<std::size_t, kNumCategories> categories{};
  std::vector<double> latencies;
};

std::vector<double> read_timing(const fs::path& path) {
  std::vector<double> out;
  if (!fs::exists(path)) return out;
  const std::string text = read_text_file(path);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    if (++line_no == 1 || line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, path.string() + ": expected frame,latency_ms");
    try {
      out.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError(line_no, path.string() + ": bad latency value");
    }
  }
  return out;
}

std::vector<double> linspace(double hi, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

int cmd_eval(const RunConfig& cfg, const Invocation& inv, std::ostream& out) {
  require(cfg.dataset, "--dataset");
  require(inv.results, "--results");
  require(cfg.output, "--output");
  std::vector<Sequence> dataset = load_dataset(cfg.dataset);
  std::erase_if(dataset, [](const Sequence& s) { return !s.has_ground_truth(); });
  if (dataset.empty()) throw std::invalid_argument("dataset has no annotated sequences");
  const auto px_thresholds = linspace(50.0, 51);
  const auto norm_thresholds = linspace(0.5, 51);
  std::vector<SequenceEval> evals(dataset.size());

  parallel_for(dataset.size(), worker_count(cfg), [&](std::size_t i) {
    const Sequence& seq = dataset[i];
    const fs::path results(inv.results);
    const Trajectory traj = read_trajectory(results / (seq.name + ".txt"));
    for (const auto& r : traj.records) {
      if (r.frame >= seq.ground_truth.size()) {
        throw std::invalid_argument(fmt::format("{}: trajectory frame {} beyond ground truth", seq.name, r.frame));
      }
    }
    SequenceEval& e = evals[i];
    e.name = seq.name;
    e.frames = traj.size();
    const auto gt = aligned_ground_truth(traj, seq.ground_truth);
    const auto boxes = traj.boxes();
    e.success = success_curve(boxes, gt);
    e.precision = precision_scores(boxes, gt);
    e.precision_px = precision_curve(boxes, gt, px_thresholds, false);
    e.precision_norm = precision_curve(boxes, gt, norm_thresholds, true);
    for (const auto& r : traj.records) ++e.categories[index_of(r.category)];
    e.latencies = read_timing(results / (seq.name + ".timing.csv"));
    if (e.latencies.empty()) e.latencies = traj.latencies_ms();
  });

  const double n = static_cast<double>(evals.size());
  SuccessCurve mean_success;
  std::vector<double> mean_px(px_thresholds.size(), 0.0);
  std::vector<double> mean_norm(norm_thresholds.size(), 0.0);
  double p = 0.0;
  double p_norm = 0.0;
  std::size_t frames = 0;
  std::size_t skipped = 0;
  std::array<std::size_t, kNumCategories> categories{};
  std::vector<double> latencies;
  ordered_json per_sequence = ordered_json::array();
  ordered_json per_sequence_timing = ordered_json::object();
  for (const auto& e : evals) {
    mean_success.thresholds = e.success.thresholds;
    for (std::size_t k = 0; k < kSuccessThresholds; ++k) mean_success.rates[k] += e.success.rates[k] / n;
    mean_success.auc += e.success.auc / n;
    for (std::size_t k = 0; k < mean_px.size(); ++k) mean_px[k] += e.precision_px[k] / n;
    for (std::size_t k = 0; k < mean_norm.size(); ++k) mean_norm[k] += e.precision_norm[k] / n;
    p += e.precision.precision / n;
    p_norm += e.precision.norm_precision / n;
    frames += e.frames;
    skipped += e.success.skipped;
    for (std::size_t k = 0; k < kNumCategories; ++k) categories[k] += e.categories[k];
    latencies.insert(latencies.end(), e.latencies.begin(), e.latencies.end());
    per_sequence.push_back({{"name", e.name},
                            {"frames", e.frames},
                            {"auc", e.success.auc},
                            {"p", e.precision.precision},
                            {"p_norm", e.precision.norm_precision},
                            {"skipped", e.success.skipped},
                            {"categories", category_object(e.categories)}});
    if (!e.latencies.empty()) per_sequence_timing[e.name] = timing_json(latency_stats(e.latencies, 0));
  }

  ordered_json report;
  report["sequences"] = evals.size();
  report["frames"] = frames;
  report["skipped"] = skipped;
  report["auc"] = mean_success.auc;
  report["p"] = p;
  report["p_norm"] = p_norm;
  report["categories"] = category_object(categories);
  report["per_sequence"] = per_sequence;
  ordered_json timing = ordered_json::object();
  if (!latencies.empty()) {
    timing = timing_json(latency_stats(latencies, 0));
    timing["per_sequence"] = per_sequence_timing;
  }
  report["timing"] = timing;

  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  write_text_file(dir / "report.json", json_text(report));
  std::string csv = "threshold,success\n";
  for (std::size_t k = 0; k < kSuccessThresholds; ++k) {
    csv += fmt::format("{},{}\n", mean_success.thresholds[k], mean_success.rates[k]);
  }
  write_text_file(dir / "success.csv", csv);
  csv = "threshold_px,precision\n";
  for (std::size_t k = 0; k < px_thresholds.size(); ++k) csv += fmt::format("{},{}\n", px_thresholds[k], mean_px[k]);
  write_text_file(dir / "precision.csv", csv);
  csv = "threshold,norm_precision\n";
  for (std::size_t k = 0; k < norm_thresholds.size(); ++k) {
    csv += fmt::format("{},{}\n", norm_thresholds[k], mean_norm[k]);
  }
  write_text_file(dir / "norm_precision.csv", csv);

  out << ordered_json{{"auc", report["auc"]}, {"p", p}, {"p_norm", p_norm}, {"sequences", evals.size()}}.dump()
      << "\n";
  return 0;
}

// ---------------------------------------------------------------- stats

ordered_json distribution_json(const SrDistribution& d) {
  ordered_json fractions = ordered_json::object();
  for (const auto c : kAllCategories) fractions[to_string(c)] = d.fraction(c);
  return {{"total", d.total()}, {"skipped", d.skipped}, {"counts", category_object(d.counts)},
          {"fractions", fractions}};
}

int cmd_stats(const RunConfig& cfg, std::ostream& out) {
  require(cfg.dataset, "--dataset");
  const auto dataset = load_dataset(cfg.dataset);
  std::vector<SrDistribution> parts(dataset.size());
  parallel_for(dataset.size(), worker_count(cfg), [&](std::size_t i) {
    parts[i] = min_sr_distribution(std::span<const BoundingBox>(dataset[i].ground_truth));
  });
  SrDistribution total;
  ordered_json per_sequence = ordered_json::object();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    total += parts[i];
    per_sequence[dataset[i].name] = distribution_json(parts[i]);
  }
  ordered_json report = distribution_json(total);
  report["sequences"] = dataset.size();
  report["per_sequence"] = per_sequence;
  if (!cfg.output.empty()) {
    fs::create_directories(cfg.output);
    write_text_file(fs::path(cfg.output) / "stats.json", json_text(report));
  }
  out << json_text(report);
  return 0;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  require(cfg.dataset, "--dataset");
  require(cfg.output, "--output");
  const auto dataset = load_dataset(cfg.dataset);
  const auto samples = sample_training_set(dataset, cfg.samples, cfg.seed, to_sampler_config(cfg));
  export_dataset(samples, cfg.output);
  std::array<std::size_t, kNumCategories> labels{};
  for (const auto& s : samples) ++labels[index_of(s.label)];
  out << ordered_json{{"samples", samples.size()}, {"labels", category_object(labels)}}.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- bench

Sequence bench_sequence(const RunConfig& cfg, std::size_t frames) {
  if (!cfg.dataset.empty()) {
    auto dataset = load_dataset(cfg.dataset);
    if (dataset.empty()) throw std::invalid_argument("dataset is empty");
    return dataset.front();
  }
  MotionSpec spec;
  spec.name = "bench";
  spec.length = frames;
  spec.image_width = 640;
  spec.image_height = 480;
  spec.target_w = 48;
  spec.target_h = 40;
  spec.law = MotionLaw::RandomWalk;
  spec.walk_sigma = 0.5;
  spec.texture_seed = cfg.seed;
  std::mt19937_64 rng(cfg.seed);
  Sequence seq = generate_synthetic_sequence(spec, rng);
  std::vector<Image> images;
  images.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) images.push_back(seq.frame(i));
  seq.frames = std::make_shared<MemoryFrameSource>(std::move(images));
  return seq;
}

int cmd_bench(const RunConfig& cfg, const Invocation& inv, std::ostream& out) {
  const Sequence seq = bench_sequence(cfg, inv.bench_frames);
  const PipelineConfig pcfg = to_pipeline_config(cfg);
  const std::size_t warmup = std::min(cfg.warmup, seq.size() > 2 ? seq.size() - 2 : 0);
  ordered_json rows = ordered_json::array();
  out << fmt::format("{:<8} {:>10} {:>12} {:>10}\n", "config", "fps", "median_ms", "mean_ms");
  auto add_row = [&](const std::string& name, const LatencyStats& s) {
    rows.push_back({{"config", name}, {"timing", timing_json(s)}});
    out << fmt::format("{:<8} {:>10.1f} {:>12.3f} {:>10.3f}\n", name, s.fps, s.median_ms, s.mean_ms);
  };
  for (const auto c : cfg.categories) {
    const auto stats = latency_benchmark(
        [&](const Sequence& s) { return fixed_sr_track_sequence(s, c, pcfg); }, seq, warmup);
    add_row(to_string(c), stats);
  }
  if (inv.bench_srrt) {
    PipelineConfig srrt = pcfg;
    srrt.allowed = {kAllCategories.begin(), kAllCategories.end()};
    add_row("srrt", latency_benchmark([&](const Sequence& s) { return srrt_track_sequence(s, srrt); }, seq, warmup));
  }
  if (!cfg.output.empty()) {
    fs::create_directories(cfg.output);
    ordered_json report{{"sequence", seq.name}, {"frames", seq.size()}, {"warmup", warmup}, {"rows", rows}};
    write_text_file(fs::path(cfg.output) / "bench.json", json_text(report));
  }
  return 0;
}

// ---------------------------------------------------------------- synth

int cmd_synth(const RunConfig& cfg, const Invocation& inv, std::ostream& out) {
  require(inv.spec, "--spec");
  require(cfg.output, "--output");
  const SynthSpec spec = parse_synth_spec(read_text_file(inv.spec));
  std::mt19937_64 rng(cfg.seed);
  std::vector<Sequence> sequences;
  for (std::size_t i = 0; i < spec.sequences; ++i) {
    MotionSpec m = spec.motion;
    if (spec.sequences > 1) {
      m.name = fmt::format("{}_{:03d}", m.name, i);
      m.texture_seed += i;
    }
    sequences.push_back(generate_synthetic_sequence(m, rng));
  }
  fs::create_directories(cfg.output);
  parallel_for(sequences.size(), worker_count(cfg), [&](std::size_t i) {
    write_sequence(sequences[i], fs::path(cfg.output) / sequences[i].name);
  });
  out << ordered_json{{"sequences", sequences.size()}, {"frames", spec.motion.length}}.dump() << "\n";
  return 0;
}

std::string error_kind(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ParseError&) {
    return "parse_error";
  } catch (const FrameReadError&) {
    return "frame_read_error";
  } catch (const IoError&) {
    return "io_error";
  } catch (const SamplingFailure&) {
    return "sampling_failure";
  } catch (const SpecInvalid&) {
    return "spec_invalid";
  } catch (const UnsupportedMode&) {
    return "unsupported_mode";
  } catch (const InvalidState&) {
    return "invalid_state";
  } catch (const std::invalid_argument&) {
    return "invalid_argument";
  } catch (const fs::filesystem_error&) {
    return "io_error";
  } catch (...) {
    return "error";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging_from_env();
  Invocation inv;

  CLI::App app{"Search-region regulated tracking toolkit", "srrt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  auto key_option = [&inv](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&inv, key](const std::string& v) { inv.overrides.emplace_back(key, v); }, help);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", inv.config_path, "Run configuration file (key = value)");
    key_option(sub, "--dataset", "dataset", "Sequence directory or directory of sequences");
    key_option(sub, "--output", "output", "Output directory");
    key_option(sub, "--seed", "seed", "Random seed");
    key_option(sub, "--workers", "workers", "Worker threads (0 = logical cores)");
  };
  auto tracking = [&](CLI::App* sub) {
    key_option(sub, "--regulator", "regulator", "oracle | classical | file:<path>");
    key_option(sub, "--tracker", "tracker", "ncc | oracle");
    key_option(sub, "--categories", "categories", "Allowed categories, e.g. 2,4,6");
    key_option(sub, "--gamma", "gamma", "Fixed search-region factor (2, 4, 6, 8); 0 = regulated");
    key_option(sub, "--K", "K", "Locking threshold");
    key_option(sub, "--lambda", "lambda", "Cosine window weight");
    key_option(sub, "--tau-miss", "tau_miss", "Miss threshold of the classical regulator");
    key_option(sub, "--sigma", "sigma", "Oracle tracker center noise (pixels)");
    key_option(sub, "--sigma-scale", "sigma_scale", "Oracle tracker relative size noise");
  };

  auto* track = app.add_subcommand("track", "Track every sequence of a dataset and write trajectories");
  common(track);
  tracking(track);

  auto* eval = app.add_subcommand("eval", "Score trajectories against ground truth");
  common(eval);
  eval->add_option("--results", inv.results, "Directory holding <sequence>.txt trajectories");

  auto* stats = app.add_subcommand("stats", "Minimum search-region distribution of a dataset");
  common(stats);

  auto* sample = app.add_subcommand("sample", "Export a class-balanced regulator training set");
  common(sample);
  key_option(sample, "--count", "samples", "Number of samples");
  key_option(sample, "--jitter", "scale_jitter", "Scale jitter range");

  auto* bench = app.add_subcommand("bench", "Per-frame latency of fixed search-region runs");
  common(bench);
  tracking(bench);
  key_option(bench, "--warmup", "warmup", "Frames dropped before timing");
  bench->add_option("--frames", inv.bench_frames, "Length of the synthetic benchmark sequence")
      ->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
  bench->add_flag("--srrt", inv.bench_srrt, "Add a row for the regulated pipeline");

  auto* synth = app.add_subcommand("synth", "Render a synthetic dataset from a motion spec file");
  common(synth);
  synth->add_option("--spec", inv.spec, "Motion spec file (key = value)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    RunConfig cfg = inv.config_path.empty() ? RunConfig{} : load_run_config(inv.config_path);
    for (const auto& [key, value] : inv.overrides) cfg.set(key, value);
    if (track->parsed()) return cmd_track(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, inv, out);
    if (stats->parsed()) return cmd_stats(cfg, out);
    if (sample->parsed()) return cmd_sample(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, inv, out);
    if (synth->parsed()) return cmd_synth(cfg, inv, out);
    err << app.help();
    return 2;
  } catch (const std::exception& e) {
    const ordered_json line{{"error", error_kind(std::current_exception())}, {"message", e.what()}};
    err << line.dump() << "\n";
    spdlog::debug("command failed: {}", e.what());
    return 1;
  }
}

}  // namespace srrt
