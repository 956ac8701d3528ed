// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "piste/geometry.hpp"

namespace piste {

struct RansacConfig {
  double inlier_threshold = 3.0;  // symmetric transfer, pixels
  double confidence = 0.995;
  int max_iterations = 5000;
  int min_inliers = 12;
  int lo_refit_rounds = 3;
  std::uint64_t seed = 0;
  // A minimal sample is rejected when any 3 of its 4 points span a triangle
  // smaller than this, in either image.
  double degeneracy_area = 1.0;  // px^2
  double sv_ratio = 10.0;        // DLT rank-deficiency ratio threshold
};

struct RansacResult {
  Homography h;
  std::vector<std::uint8_t> inlier_flags;  // one per input correspondence
  int iterations_used = 0;
  double mean_inlier_error = 0.0;

  int inlier_count() const {
    int n = 0;
    for (auto f : inlier_flags) n += f != 0;
    return n;
  }
};

/// Randomized consensus with degenerate-sample rejection and local
/// optimization: seeded minimal 4-samples, collinearity rejection, DLT fit,
/// symmetric-transfer scoring, adaptive iteration bound, then up to
/// lo_refit_rounds full-inlier DLT refits with re-evaluation (a refit that
/// loses inliers is discarded, so the inlier count is monotone).
///
/// Deterministic for fixed (corrs, cfg.seed). Throws InsufficientData (< 4
/// correspondences), AllDegenerate (every sampled quadruple degenerate) or
/// NoConsensus (no model reached min_inliers within the iteration budget).
RansacResult estimate_homography(std::span<const Correspondence> corrs,
                                 const RansacConfig& cfg);

}  // namespace piste
