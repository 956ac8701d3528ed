// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "piste/geometry.hpp"
#include "piste/random.hpp"

namespace piste::testutil {

// Random well-conditioned homography: a similarity with bounded shear/tilt
// perturbations, rejected unless cond(m) stays below the given bound.
inline Homography random_homography(Rng& rng, double cond_limit = 1e6) {
  for (;;) {
    const double angle = rng.uniform(-0.3, 0.3);
    const double scale = rng.uniform(0.8, 1.25);
    const double tx = rng.uniform(-40.0, 40.0);
    const double ty = rng.uniform(-40.0, 40.0);
    const double shear = rng.uniform(-0.1, 0.1);
    const double gx = rng.uniform(-1e-4, 1e-4);
    const double gy = rng.uniform(-1e-4, 1e-4);

    Eigen::Matrix3d m;
    const double c = std::cos(angle), s = std::sin(angle);
    m << scale * c, scale * (-s + shear), tx,
         scale * s, scale * (c + shear * 0.5), ty,
         gx, gy, 1.0;

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(2);
    if (!std::isfinite(cond) || cond > cond_limit) continue;
    Homography h;
    h.m = m;
    return canonical(h);
  }
}

inline Point2 random_point(Rng& rng, double w = 1280.0, double h = 720.0) {
  return Point2{rng.uniform(0.0, w), rng.uniform(0.0, h)};
}

// Consecutive-frame-like motion: projective, but with frame-corner
// displacements capped (default 30 px).
inline Homography random_interframe_homography(Rng& rng,
                                               double max_corner_px = 30.0,
                                               double w = 1280.0,
                                               double h = 720.0) {
  for (;;) {
    const double angle = rng.uniform(-0.01, 0.01);
    const double scale = rng.uniform(0.99, 1.01);
    const double tx = rng.uniform(-15.0, 15.0);
    const double ty = rng.uniform(-15.0, 15.0);
    const double gx = rng.uniform(-2e-6, 2e-6);
    const double gy = rng.uniform(-2e-6, 2e-6);

    Eigen::Matrix3d m;
    const double c = std::cos(angle), s = std::sin(angle);
    m << scale * c, -scale * s, tx, scale * s, scale * c, ty, gx, gy, 1.0;
    Homography candidate;
    candidate.m = m;

    const Point2 corners[4] = {{0, 0}, {w, 0}, {w, h}, {0, h}};
    bool mild = true;
    for (const Point2& corner : corners) {
      const auto mapped = try_apply_homography(candidate, corner);
      if (!mapped || distance(*mapped, corner) > max_corner_px) {
        mild = false;
        break;
      }
    }
    if (mild) return canonical(candidate);
  }
}

// Exact correspondences sampled from a known homography.
inline std::vector<Correspondence> correspondences_from(
    const Homography& h, Rng& rng, int count, double w = 1280.0,
    double h_px = 720.0) {
  std::vector<Correspondence> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const Point2 p = random_point(rng, w, h_px);
    const auto q = try_apply_homography(h, p);
    if (!q) continue;
    out.push_back(Correspondence{p, *q});
  }
  return out;
}

}  // namespace piste::testutil
