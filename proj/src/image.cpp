#include "srrt/image.hpp"

#include <numeric>
#include <stdexcept>

namespace srrt {

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels < 0) {
    throw std::invalid_argument("image dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

std::span<float> Image::plane(int c) {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  return {data_.data() + c * n, n};
}

std::span<const float> Image::plane(int c) const {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  return {data_.data() + c * n, n};
}

std::vector<double> Image::channel_means() const {
  std::vector<double> means(channels_, 0.0);
  const double n = static_cast<double>(width_) * height_;
  if (n == 0) return means;
  for (int c = 0; c < channels_; ++c) {
    const auto p = plane(c);
    means[c] = std::accumulate(p.begin(), p.end(), 0.0) / n;
  }
  return means;
}

Image Image::to_gray() const {
  if (channels_ == 1) return *this;
  Image gray(width_, height_, 1);
  auto out = gray.plane(0);
  for (int c = 0; c < channels_; ++c) {
    const auto p = plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) out[i] += p[i];
  }
  const float inv = 1.0f / static_cast<float>(channels_);
  for (auto& v : out) v *= inv;
  return gray;
}

}  // namespace srrt
