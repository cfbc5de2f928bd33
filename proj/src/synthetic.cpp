#include "srrt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "srrt/errors.hpp"

namespace srrt {

namespace {

// Smooth value noise: random lattice values every `cell` pixels, bilinearly
// interpolated, plus per-pixel grain. Rounded to integers like 8-bit video.
Image value_noise(int width, int height, int channels, int cell, float lo, float hi, float grain,
                  std::mt19937_64& rng) {
  std::uniform_real_distribution<float> level(lo, hi);
  std::uniform_real_distribution<float> fine(-grain, grain);
  const int gw = width / cell + 2;
  const int gh = height / cell + 2;
  Image img(width, height, channels);
  std::vector<float> lattice(static_cast<std::size_t>(gw) * gh);
  for (int c = 0; c < channels; ++c) {
    for (auto& v : lattice) v = level(rng);
    for (int y = 0; y < height; ++y) {
      const float fy = static_cast<float>(y) / cell;
      const int y0 = static_cast<int>(fy);
      const float ty = fy - y0;
      for (int x = 0; x < width; ++x) {
        const float fx = static_cast<float>(x) / cell;
        const int x0 = static_cast<int>(fx);
        const float tx = fx - x0;
        const float a = lattice[y0 * gw + x0];
        const float b = lattice[y0 * gw + x0 + 1];
        const float d = lattice[(y0 + 1) * gw + x0];
        const float e = lattice[(y0 + 1) * gw + x0 + 1];
        const float top = a + (b - a) * tx;
        const float bot = d + (e - d) * tx;
        img.at(c, y, x) = std::round(std::clamp(top + (bot - top) * ty + fine(rng), 0.0f, 255.0f));
      }
    }
  }
  return img;
}

class RenderedFrameSource final : public FrameSource {
 public:
  RenderedFrameSource(Image background, Image target, std::vector<BoundingBox> boxes)
      : background_(std::move(background)), target_(std::move(target)), boxes_(std::move(boxes)) {}

  std::size_t size() const override { return boxes_.size(); }

  Image load(std::size_t index) const override {
    if (index >= boxes_.size()) throw FrameReadError(index, "index out of range");
    Image frame = background_;
    const BoundingBox& b = boxes_[index];
    // pixels whose centers fall inside the box take the target texture
    const int x_begin = std::max(0, static_cast<int>(std::ceil(b.left() - 0.5)));
    const int x_end = std::min(frame.width(), static_cast<int>(std::ceil(b.right() - 0.5)));
    const int y_begin = std::max(0, static_cast<int>(std::ceil(b.top() - 0.5)));
    const int y_end = std::min(frame.height(), static_cast<int>(std::ceil(b.bottom() - 0.5)));
    for (int c = 0; c < frame.channels(); ++c) {
      for (int y = y_begin; y < y_end; ++y) {
        const int ty = std::clamp(static_cast<int>(y + 0.5 - b.top()), 0, target_.height() - 1);
        for (int x = x_begin; x < x_end; ++x) {
          const int tx = std::clamp(static_cast<int>(x + 0.5 - b.left()), 0, target_.width() - 1);
          frame.at(c, y, x) = target_.at(c, ty, tx);
        }
      }
    }
    return frame;
  }

 private:
  Image background_;
  Image target_;
  std::vector<BoundingBox> boxes_;
};

}  // namespace

std::vector<BoundingBox> synthetic_trajectory(const MotionSpec& spec, std::mt19937_64& rng) {
  if (spec.length < 1) throw SpecInvalid("motion spec needs at least one frame");
  if (spec.image_width < 8 || spec.image_height < 8) throw SpecInvalid("image must be at least 8x8");
  if (spec.channels != 1 && spec.channels != 3) throw SpecInvalid("channels must be 1 or 3");
  if (!(spec.target_w > 0.0) || !(spec.target_h > 0.0)) throw SpecInvalid("target size must be positive");
  if (spec.law == MotionLaw::RandomWalk && !(spec.walk_sigma >= 0.0)) {
    throw SpecInvalid("random walk sigma must be non-negative");
  }

  std::normal_distribution<double> step(0.0, spec.law == MotionLaw::RandomWalk ? spec.walk_sigma : 0.0);
  BoundingBox box{spec.start_cx < 0.0 ? spec.image_width / 2.0 : spec.start_cx,
                  spec.start_cy < 0.0 ? spec.image_height / 2.0 : spec.start_cy, spec.target_w, spec.target_h};
  std::vector<BoundingBox> boxes;
  boxes.reserve(spec.length);
  for (std::size_t t = 0; t < spec.length; ++t) {
    if (t > 0) {
      box.cx += spec.vx;
      box.cy += spec.vy;
      if (spec.law == MotionLaw::RandomWalk && spec.walk_sigma > 0.0) {
        box.cx += step(rng);
        box.cy += step(rng);
      }
      if (spec.law == MotionLaw::Scripted) {
        for (const auto& j : spec.jumps) {
          if (j.frame == t) {
            box.cx += j.dx;
            box.cy += j.dy;
          }
        }
      }
    }
    if (box.left() < 0.0 || box.top() < 0.0 || box.right() > spec.image_width ||
        box.bottom() > spec.image_height) {
      throw SpecInvalid("target leaves the canvas at frame " + std::to_string(t));
    }
    boxes.push_back(box);
  }
  return boxes;
}

Sequence generate_synthetic_sequence(const MotionSpec& spec, std::mt19937_64& rng) {
  auto boxes = synthetic_trajectory(spec, rng);
  std::mt19937_64 texture_rng(spec.texture_seed);
  Image background = value_noise(spec.image_width, spec.image_height, spec.channels, 24, 40.0f, 160.0f, 6.0f,
                                 texture_rng);
  const int tw = static_cast<int>(std::ceil(spec.target_w)) + 1;
  const int th = static_cast<int>(std::ceil(spec.target_h)) + 1;
  Image target = value_noise(tw, th, spec.channels, std::max(2, std::min(tw, th) / 4), 0.0f, 255.0f, 4.0f,
                             texture_rng);

  Sequence seq;
  seq.name = spec.name;
  seq.width = spec.image_width;
  seq.height = spec.image_height;
  seq.ground_truth = boxes;
  seq.frames = std::make_shared<RenderedFrameSource>(std::move(background), std::move(target), std::move(boxes));
  return seq;
}

}  // namespace srrt
