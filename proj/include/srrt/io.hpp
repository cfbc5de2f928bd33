#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "srrt/geometry.hpp"
#include "srrt/sequence.hpp"
#include "srrt/trajectory.hpp"

namespace srrt {

/// Decodes an 8-bit grayscale or color image (PNG, JPEG, BMP, ...) into
/// planar RGB or single-channel form.
Image read_image(const std::filesystem::path& path);
/// Writes an image rounded and clamped to 8 bits; format follows the extension.
void write_image(const Image& image, const std::filesystem::path& path);

bool is_image_file(const std::filesystem::path& path);

/// Parses `x,y,w,h` top-left annotation lines (comma, tab or space separated)
/// into center-form boxes. Boxes with w or h <= 0 are kept as absent markers.
/// Blank lines are skipped. Throws ParseError with the 1-based line number.
std::vector<BoundingBox> parse_groundtruth(std::string_view text);
std::string format_groundtruth(const std::vector<BoundingBox>& boxes);

/// Loads `dir` laid out as `<dir>/img/*.{jpg,png,...}` plus optional
/// `<dir>/groundtruth.txt`. Any other subdirectory holding images is accepted
/// when `img/` is missing. Frames are ordered by the numeric part of the name.
Sequence load_sequence(const std::filesystem::path& dir);

/// A dataset is either a single sequence directory or a directory of them.
/// Sequences are returned sorted by name.
std::vector<Sequence> load_dataset(const std::filesystem::path& root);

/// Writes a sequence in the layout load_sequence() reads, frames as
/// `img/00000001.png`, ...
void write_sequence(const Sequence& seq, const std::filesystem::path& dir);

/// Trajectory file: `frame,x,y,w,h,category,confidence,latency_ms` per line,
/// top-left boxes, category as its factor (2/4/6/8), no header. Without the
/// latency column the file is deterministic; the parser accepts both forms
/// and reads a missing latency as 0.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& path, bool with_latency = true);
Trajectory read_trajectory(const std::filesystem::path& path);
std::string format_trajectory(const Trajectory& traj, bool with_latency = true);
Trajectory parse_trajectory(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace srrt
