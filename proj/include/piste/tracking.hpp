// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "piste/frame.hpp"
#include "piste/geometry.hpp"

namespace piste {

/// Axis-aligned box, top-left anchored, in pixels.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

// Bottom-center of the box: the proxy for the athlete/ground contact point.
inline Point2 footpoint(const BBox& b) {
  return Point2{b.x + b.w / 2.0, b.y + b.h};
}

double iou(const BBox& a, const BBox& b);

struct TrackerConfig {
  double window_scale = 2.5;   // search window size relative to the box
  double template_alpha = 0.1; // exponential template update weight
  double lost_threshold = 0.2; // best ZNCC below this reports LostTarget
};

/// Zero-normalized cross-correlation template tracker with a fixed box size.
/// Single-owner, advanced strictly in frame order. On LostTarget the state
/// is left untouched so the caller can substitute the previous box.
class TemplateTracker {
 public:
  // Throws InvalidBox unless b0 is at least 8x8 and fully inside frame0.
  TemplateTracker(const Frame& frame0, const BBox& b0, TrackerConfig cfg = {});

  // Returns the new box (always fully inside the frame) and updates the
  // template. Throws LostTarget when the best ZNCC falls below threshold,
  // DimensionMismatch when the frame size changed.
  BBox track(const Frame& frame);

  const BBox& box() const { return box_; }

 private:
  TrackerConfig cfg_;
  int frame_width_;
  int frame_height_;
  int tw_;
  int th_;
  std::vector<float> template_;
  BBox box_;
};

/// Per-frame boxes supplied by an external tracker. Missing frame indices
/// are explicit gaps: at(frame) returns nullopt and the caller substitutes
/// the previous box.
struct TrackTable {
  std::map<int, BBox> boxes;

  std::optional<BBox> at(int frame) const {
    const auto it = boxes.find(frame);
    if (it == boxes.end()) return std::nullopt;
    return it->second;
  }
};

// CSV schema: optional header "frame,x,y,w,h", one row per frame, '#'
// comment lines, frame indices strictly increasing. Throws ParseError
// (with line/column) or NonMonotonicFrames.
TrackTable load_track_file(const std::filesystem::path& path);

}  // namespace piste
