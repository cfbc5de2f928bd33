#include "srrt/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "srrt/errors.hpp"

namespace fs = std::filesystem;

namespace srrt {

std::vector<BoundingBox> Trajectory::boxes() const {
  std::vector<BoundingBox> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.box);
  return out;
}

std::vector<double> Trajectory::latencies_ms() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.latency_ms);
  return out;
}

Image read_image(const fs::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw IoError(path, "cannot decode image");
  if (m.depth() != CV_8U) {
    throw IoError(path, "only 8-bit images are supported");
  }
  if (m.channels() == 4) {
    cv::cvtColor(m, m, cv::COLOR_BGRA2RGB);
  } else if (m.channels() == 3) {
    cv::cvtColor(m, m, cv::COLOR_BGR2RGB);
  } else if (m.channels() != 1) {
    throw IoError(path, "unsupported channel count " + std::to_string(m.channels()));
  }
  const int channels = m.channels();
  Image img(m.cols, m.rows, channels);
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      for (int c = 0; c < channels; ++c) img.at(c, y, x) = row[x * channels + c];
    }
  }
  return img;
}

void write_image(const Image& image, const fs::path& path) {
  if (image.empty()) throw IoError(path, "refusing to write an empty image");
  const int channels = image.channels();
  if (channels != 1 && channels != 3) throw IoError(path, "only 1 or 3 channel images can be written");
  cv::Mat m(image.height(), image.width(), channels == 1 ? CV_8UC1 : CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < channels; ++c) {
        // RGB planes -> interleaved BGR for OpenCV
        const int dst = channels == 3 ? 2 - c : c;
        const float v = std::clamp(image.at(c, y, x), 0.0f, 255.0f);
        row[x * channels + dst] = static_cast<std::uint8_t>(std::lround(v));
      }
    }
  }
  if (!cv::imwrite(path.string(), m)) throw IoError(path, "cannot encode image");
}

bool is_image_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png" || ext == ".bmp" || ext == ".pgm" ||
         ext == ".ppm" || ext == ".tif" || ext == ".tiff";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// Comma-separated when the line has a comma, otherwise tab/space separated.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      out.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    return out;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.find_first_not_of(" \t") != std::string_view::npos) fn(line_no, line);
    if (end == text.size()) break;
    start = end + 1;
  }
}

// Numeric part of a frame file name; names without digits sort after numbered ones.
std::pair<long long, std::string> frame_sort_key(const fs::path& p) {
  const std::string stem = p.stem().string();
  std::string digits;
  for (const char c : stem) {
    if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
  }
  long long n = std::numeric_limits<long long>::max();
  if (!digits.empty() && digits.size() < 18) n = std::stoll(digits);
  return {n, stem};
}

std::vector<fs::path> image_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return frame_sort_key(a) < frame_sort_key(b); });
  return files;
}

bool looks_like_sequence(const fs::path& dir) {
  if (fs::exists(dir / "groundtruth.txt") || fs::is_directory(dir / "img")) return true;
  return false;
}

}  // namespace

std::vector<BoundingBox> parse_groundtruth(std::string_view text) {
  std::vector<BoundingBox> boxes;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields x,y,w,h, got " + std::to_string(fields.size()));
    }
    double v[4];
    for (int i = 0; i < 4; ++i) {
      if (!parse_double(fields[i], v[i])) {
        throw ParseError(line_no, "not a number: '" + std::string(fields[i]) + "'");
      }
    }
    boxes.push_back(BoundingBox::from_top_left(v[0], v[1], v[2], v[3]));
  });
  return boxes;
}

std::string format_groundtruth(const std::vector<BoundingBox>& boxes) {
  std::string out;
  for (const auto& b : boxes) out += fmt::format("{},{},{},{}\n", b.left(), b.top(), b.w, b.h);
  return out;
}

Sequence load_sequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir, "not a sequence directory");
  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();

  fs::path img_dir = dir / "img";
  if (!fs::is_directory(img_dir)) {
    img_dir.clear();
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory()) subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& sub : subdirs) {
      if (!image_files(sub).empty()) {
        img_dir = sub;
        break;
      }
    }
  }
  if (img_dir.empty()) throw IoError(dir, "sequence '" + seq.name + "' has no image folder");
  auto files = image_files(img_dir);
  if (files.empty()) throw IoError(img_dir, "sequence '" + seq.name + "' has no images");

  const fs::path gt_path = dir / "groundtruth.txt";
  if (fs::exists(gt_path)) {
    try {
      seq.ground_truth = parse_groundtruth(read_text_file(gt_path));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), "sequence '" + seq.name + "' groundtruth.txt: " + e.what());
    }
    if (seq.ground_truth.size() != files.size()) {
      throw IoError(gt_path, "sequence '" + seq.name + "': annotation count mismatch (" +
                                 std::to_string(seq.ground_truth.size()) + " boxes, " +
                                 std::to_string(files.size()) + " frames)");
    }
  }

  const Image first = read_image(files.front());
  seq.width = first.width();
  seq.height = first.height();
  seq.frames = std::make_shared<FileFrameSource>(std::move(files));
  return seq;
}

std::vector<Sequence> load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError(root, "dataset directory does not exist");
  if (looks_like_sequence(root)) return {load_sequence(root)};
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && looks_like_sequence(entry.path())) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw IoError(root, "no sequences found");
  std::vector<Sequence> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(load_sequence(d));
  return out;
}

void write_sequence(const Sequence& seq, const fs::path& dir) {
  fs::create_directories(dir / "img");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    write_image(seq.frame(i), dir / "img" / fmt::format("{:08d}.png", i + 1));
  }
  if (seq.has_ground_truth()) write_text_file(dir / "groundtruth.txt", format_groundtruth(seq.ground_truth));
}

std::string format_trajectory(const Trajectory& traj, bool with_latency) {
  std::string out;
  for (const auto& r : traj.records) {
    out += fmt::format("{},{},{},{},{},{},{}", r.frame, r.box.left(), r.box.top(), r.box.w, r.box.h,
                       static_cast<int>(factor(r.category)), r.confidence);
    out += with_latency ? fmt::format(",{}\n", r.latency_ms) : std::string("\n");
  }
  return out;
}

Trajectory parse_trajectory(std::string_view text) {
  Trajectory traj;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto fields = split_fields(line);
    if (fields.size() != 7 && fields.size() != 8) throw ParseError(line_no, "expected 7 or 8 trajectory fields");
    double v[8] = {};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], v[i])) {
        throw ParseError(line_no, "not a number: '" + std::string(fields[i]) + "'");
      }
    }
    FrameRecord r;
    if (v[0] < 0 || v[0] != std::floor(v[0])) throw ParseError(line_no, "bad frame index");
    r.frame = static_cast<std::size_t>(v[0]);
    r.box = BoundingBox::from_top_left(v[1], v[2], v[3], v[4]);
    try {
      r.category = category_from_factor(static_cast<int>(v[5]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    r.confidence = v[6];
    r.latency_ms = v[7];
    if (!traj.records.empty() && r.frame <= traj.records.back().frame) {
      throw ParseError(line_no, "frame indices must increase");
    }
    traj.records.push_back(r);
  });
  return traj;
}

void write_trajectory(const Trajectory& traj, const fs::path& path, bool with_latency) {
  write_text_file(path, format_trajectory(traj, with_latency));
}

Trajectory read_trajectory(const fs::path& path) {
  try {
    return parse_trajectory(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(path, "write failed");
}

}  // namespace srrt
