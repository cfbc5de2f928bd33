#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srrt/geometry.hpp"

namespace srrt {

/// Produces frame images on demand.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  /// Throws FrameReadError naming the index on failure.
  virtual Image load(std::size_t index) const = 0;
};

class FileFrameSource final : public FrameSource {
 public:
  explicit FileFrameSource(std::vector<std::filesystem::path> files) : files_(std::move(files)) {}
  std::size_t size() const override { return files_.size(); }
  Image load(std::size_t index) const override;
  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
};

class MemoryFrameSource final : public FrameSource {
 public:
  explicit MemoryFrameSource(std::vector<Image> frames) : frames_(std::move(frames)) {}
  std::size_t size() const override { return frames_.size(); }
  Image load(std::size_t index) const override;

 private:
  std::vector<Image> frames_;
};

/// A named frame sequence with optional ground truth (center form; boxes with
/// w or h <= 0 mark frames where the target is absent).
struct Sequence {
  std::string name;
  std::shared_ptr<const FrameSource> frames;
  std::vector<BoundingBox> ground_truth;
  int width = 0;
  int height = 0;

  std::size_t size() const { return frames ? frames->size() : 0; }
  bool has_ground_truth() const { return !ground_truth.empty(); }
  Image frame(std::size_t i) const;
  std::optional<BoundingBox> gt(std::size_t i) const;
};

}  // namespace srrt
