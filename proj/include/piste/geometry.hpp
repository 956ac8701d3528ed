// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "piste/errors.hpp"

namespace piste {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline bool is_finite(const Point2& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// One src (previous frame) / dst (current frame) point pair in pixels.
struct Correspondence {
  Point2 src;
  Point2 dst;
};

/// Planar projective map between pixel coordinate systems, column-vector
/// convention: p' = dehomogenize(m * [x, y, 1]^T). Stored at canonical
/// scale: m(2,2) = 1 whenever the entry is not negligible relative to the
/// matrix norm, otherwise unit Frobenius norm.
struct Homography {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
};

// Points mapped beyond this |w'| are treated as crossing the horizon.
inline constexpr double kHorizonEpsilon = 1e-9;

Homography canonical(const Homography& h);
bool is_invertible(const Homography& h);

Homography translation(double tx, double ty);
Homography rotation_about(double radians, const Point2& center);
Homography scale_about(double factor, const Point2& center);
Homography projective_tilt(double tau_x, double tau_y);

// p' = h2(h1(p)) for all p away from both horizons.
Homography compose(const Homography& h2, const Homography& h1);

// Throws SingularMatrix when |det| <= 1e-12 at canonical scale.
Homography invert(const Homography& h);

// nullopt when the point crosses the projective horizon (|w'| <= 1e-9);
// callers drop such points instead of clamping them.
std::optional<Point2> try_apply_homography(const Homography& h,
                                           const Point2& p);

// Throws PointAtInfinity at the horizon.
Point2 apply_homography(const Homography& h, const Point2& p);

/// Least-squares homography from >= 4 correspondences via the null space of
/// the stacked linear system; inputs are Hartley-normalized internally.
/// Throws InsufficientData (< 4) or DegenerateConfiguration when the system
/// does not pin down a unique solution (two smallest singular values within
/// ratio `sv_ratio` of each other, or rank-deficient outright).
Homography dlt_homography(std::span<const Correspondence> corrs,
                          double sv_ratio = 10.0);

// Forward plus backward transfer residual in pixels; +infinity when either
// direction hits the horizon (treated as an outlier).
double symmetric_transfer_error(const Homography& h, const Correspondence& c);

// Same metric with the inverse computed once; the RANSAC scoring loop uses
// this to avoid a 3x3 inversion per correspondence.
class TransferScorer {
 public:
  explicit TransferScorer(const Homography& h);  // throws SingularMatrix
  double operator()(const Correspondence& c) const;

 private:
  Homography fwd_;
  Homography inv_;
};

}  // namespace piste
