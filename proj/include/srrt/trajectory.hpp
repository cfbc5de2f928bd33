#pragma once

#include <cstddef>
#include <vector>

#include "srrt/geometry.hpp"

namespace srrt {

struct FrameRecord {
  std::size_t frame = 0;
  BoundingBox box;
  RadiusCategory category = RadiusCategory::SR2;
  double confidence = 0.0;
  double latency_ms = 0.0;
};

/// Per-frame tracking output. Records start at frame 1; frame 0 is the
/// initialization frame and is not recorded.
struct Trajectory {
  std::vector<FrameRecord> records;

  std::size_t size() const { return records.size(); }
  std::vector<BoundingBox> boxes() const;
  std::vector<double> latencies_ms() const;
};

}  // namespace srrt
