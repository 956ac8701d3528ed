// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "piste/frame.hpp"
#include "piste/geometry.hpp"

namespace piste {

struct Keypoint {
  Point2 pos;          // sub-pixel position
  double score = 0.0;  // minimum-eigenvalue corner strength
};

/// 256-bit binary descriptor: fixed pseudo-random intensity-pair comparisons
/// over a box-smoothed 31x31 patch. The pair table is baked from a fixed
/// seed, so descriptors are identical across runs and machines.
struct Descriptor {
  std::array<std::uint64_t, 4> bits{};
};

inline constexpr int kDescriptorBits = 256;
inline constexpr int kPatchHalfWidth = 15;  // descriptor sampling reach
inline constexpr int kDetectMargin = 16;    // keypoints at least this far in

/// Shi-Tomasi corners: minimum eigenvalue of the 3x3 gradient covariance
/// (Sobel gradients), greedy non-maximum suppression at Chebyshev radius
/// `nms_radius`, adaptive score floor at 1% of the frame maximum, quadratic
/// sub-pixel refinement. Score-sorted descending, at most `max_keypoints`.
std::vector<Keypoint> detect(const Frame& frame, int max_keypoints = 1024,
                             int nms_radius = 8);

// One descriptor per keypoint, order-preserving. Throws BorderViolation when
// a keypoint sits closer than kPatchHalfWidth to the frame border.
std::vector<Descriptor> describe(const Frame& frame,
                                 std::span<const Keypoint> kps);

inline int hamming(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (int i = 0; i < 4; ++i) {
    d += std::popcount(a.bits[i] ^ b.bits[i]);
  }
  return d;
}

}  // namespace piste
