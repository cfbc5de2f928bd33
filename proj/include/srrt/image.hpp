#pragma once

#include <span>
#include <vector>

namespace srrt {

/// Planar float image. Channel c occupies one contiguous width*height block,
/// rows top to bottom. Pixel values are on the 0..255 scale.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<float> plane(int c);
  std::span<const float> plane(int c) const;

  std::vector<double> channel_means() const;

  /// Channel average; returns a copy when already single-channel.
  Image to_gray() const;

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

}  // namespace srrt
