// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "piste/features.hpp"
#include "piste/tracking.hpp"

namespace piste {

/// User-supplied exclusion bitmap (broadcast banners, score overlays).
/// Nonzero = excluded. Dimensions must match the frames it is applied to.
struct StaticMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, one entry per pixel

  bool excluded(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return false;
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// Whitish-texture test, applied to each keypoint's 3x3 neighbourhood: a
/// pixel counts when min(R,G,B) >= min_channel and max-min <= max_spread;
/// the keypoint is dropped when at least 5 of 9 pixels count.
struct SnowFilterConfig {
  int min_channel = 200;
  int max_spread = 30;
  bool enabled = true;
};

// Keeps keypoints strictly outside the box inflated by `margin` on all
// sides; points exactly on the inflated edge are removed. Order-preserving.
std::vector<Keypoint> filter_bbox(std::span<const Keypoint> kps,
                                  const BBox& bbox, double margin);

// Removes keypoints whose rounded pixel position (half away from zero) has
// a set mask bit. Throws DimensionMismatch when the mask does not match the
// frame dimensions.
std::vector<Keypoint> filter_static_mask(std::span<const Keypoint> kps,
                                         const StaticMask& mask,
                                         int frame_width, int frame_height);

std::vector<Keypoint> filter_snow(std::span<const Keypoint> kps,
                                  const Frame& frame,
                                  const SnowFilterConfig& cfg);

}  // namespace piste
