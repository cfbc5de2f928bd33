#include "srrt/sequence.hpp"

#include "srrt/errors.hpp"
#include "srrt/io.hpp"

namespace srrt {

Image FileFrameSource::load(std::size_t index) const {
  if (index >= files_.size()) throw FrameReadError(index, "index out of range");
  try {
    return read_image(files_[index]);
  } catch (const std::exception& e) {
    throw FrameReadError(index, e.what());
  }
}

Image MemoryFrameSource::load(std::size_t index) const {
  if (index >= frames_.size()) throw FrameReadError(index, "index out of range");
  return frames_[index];
}

Image Sequence::frame(std::size_t i) const {
  if (!frames) throw FrameReadError(i, "sequence '" + name + "' has no frames");
  return frames->load(i);
}

std::optional<BoundingBox> Sequence::gt(std::size_t i) const {
  if (i >= ground_truth.size()) return std::nullopt;
  return ground_truth[i];
}

}  // namespace srrt
