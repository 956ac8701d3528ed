// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/geometry.hpp"

#include <Eigen/SVD>
#include <limits>

namespace piste {

namespace {

constexpr double kFrobeniusOneSlack = 16 * std::numeric_limits<double>::epsilon();

}  // namespace

Homography canonical(const Homography& h) {
  const double fro = h.m.norm();
  const double pivot = h.m(2, 2);
  // The pivot test is relative to the matrix norm so that the branch choice
  // is invariant under scaling.
  if (std::abs(pivot) > kHorizonEpsilon * fro) {
    if (pivot == 1.0) return h;
    Homography out;
    out.m = h.m / pivot;
    return out;
  }
  if (std::abs(fro - 1.0) <= kFrobeniusOneSlack) return h;
  Homography out;
  out.m = h.m / fro;
  return out;
}

bool is_invertible(const Homography& h) {
  return std::abs(canonical(h).m.determinant()) > 1e-12;
}

Homography translation(double tx, double ty) {
  Homography h;
  h.m(0, 2) = tx;
  h.m(1, 2) = ty;
  return h;
}

Homography rotation_about(double radians, const Point2& center) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  Homography h;
  h.m << c, -s, center.x - c * center.x + s * center.y,
         s,  c, center.y - s * center.x - c * center.y,
         0,  0, 1;
  return h;
}

Homography scale_about(double factor, const Point2& center) {
  Homography h;
  h.m << factor, 0, center.x * (1.0 - factor),
         0, factor, center.y * (1.0 - factor),
         0, 0, 1;
  return h;
}

Homography projective_tilt(double tau_x, double tau_y) {
  Homography h;
  h.m(2, 0) = tau_x;
  h.m(2, 1) = tau_y;
  return h;
}

Homography compose(const Homography& h2, const Homography& h1) {
  Homography out;
  out.m = h2.m * h1.m;
  return canonical(out);
}

Homography invert(const Homography& h) {
  const Homography c = canonical(h);
  const double det = c.m.determinant();
  if (std::abs(det) <= 1e-12) {
    throw Error(ErrorCode::SingularMatrix,
                "homography is not invertible (|det| <= 1e-12)");
  }
  Homography out;
  out.m = c.m.inverse();
  return canonical(out);
}

std::optional<Point2> try_apply_homography(const Homography& h,
                                           const Point2& p) {
  const Eigen::Vector3d v = h.m * Eigen::Vector3d(p.x, p.y, 1.0);
  if (std::abs(v(2)) <= kHorizonEpsilon) return std::nullopt;
  return Point2{v(0) / v(2), v(1) / v(2)};
}

Point2 apply_homography(const Homography& h, const Point2& p) {
  const auto mapped = try_apply_homography(h, p);
  if (!mapped) {
    throw Error(ErrorCode::PointAtInfinity,
                "mapped point crosses the projective horizon");
  }
  return *mapped;
}

namespace {

struct Normalization {
  Eigen::Matrix3d transform;   // pixel -> normalized
  std::vector<Point2> points;  // normalized coordinates
};

// Translate the centroid to the origin and scale the mean distance to
// sqrt(2); unnormalized systems are badly conditioned at image scale.
Normalization hartley_normalize(std::span<const Correspondence> corrs,
                                bool use_dst) {
  const std::size_t n = corrs.size();
  double cx = 0.0, cy = 0.0;
  for (const auto& c : corrs) {
    const Point2& p = use_dst ? c.dst : c.src;
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);

  double mean_dist = 0.0;
  for (const auto& c : corrs) {
    const Point2& p = use_dst ? c.dst : c.src;
    mean_dist += std::hypot(p.x - cx, p.y - cy);
  }
  mean_dist /= static_cast<double>(n);
  if (mean_dist < 1e-12) {
    throw Error(ErrorCode::DegenerateConfiguration,
                "all points coincide; no unique homography");
  }
  const double scale = std::sqrt(2.0) / mean_dist;

  Normalization out;
  out.transform << scale, 0, -scale * cx, 0, scale, -scale * cy, 0, 0, 1;
  out.points.reserve(n);
  for (const auto& c : corrs) {
    const Point2& p = use_dst ? c.dst : c.src;
    out.points.push_back(Point2{scale * (p.x - cx), scale * (p.y - cy)});
  }
  return out;
}

}  // namespace

Homography dlt_homography(std::span<const Correspondence> corrs,
                          double sv_ratio) {
  const std::size_t n = corrs.size();
  if (n < 4) {
    throw Error(ErrorCode::InsufficientData,
                "homography fit needs >= 4 correspondences, got " +
                    std::to_string(n));
  }

  const Normalization src = hartley_normalize(corrs, /*use_dst=*/false);
  const Normalization dst = hartley_normalize(corrs, /*use_dst=*/true);

  Eigen::MatrixXd a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = src.points[i].x, y = src.points[i].y;
    const double u = dst.points[i].x, v = dst.points[i].y;
    a.row(2 * i) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    a.row(2 * i + 1) << x, y, 1, 0, 0, 0, -u * x, -u * y, -u;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smallest = sv(8);
  const double second = sv(7);
  const double largest = sv(0);
  // A rank-deficient system has no unique null vector: either the two
  // smallest singular values sit within sv_ratio of each other, or the
  // second-smallest is itself numerically zero.
  if (second < sv_ratio * smallest || second <= 1e-10 * largest) {
    throw Error(ErrorCode::DegenerateConfiguration,
                "DLT system is rank-deficient (non-unique solution)");
  }

  const Eigen::VectorXd hvec = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << hvec(0), hvec(1), hvec(2), hvec(3), hvec(4), hvec(5), hvec(6),
      hvec(7), hvec(8);

  Homography out;
  out.m = dst.transform.inverse() * hn * src.transform;
  return canonical(out);
}

double symmetric_transfer_error(const Homography& h, const Correspondence& c) {
  return TransferScorer(h)(c);
}

TransferScorer::TransferScorer(const Homography& h)
    : fwd_(canonical(h)), inv_(invert(h)) {}

double TransferScorer::operator()(const Correspondence& c) const {
  const auto forward = try_apply_homography(fwd_, c.src);
  const auto backward = try_apply_homography(inv_, c.dst);
  if (!forward || !backward) {
    return std::numeric_limits<double>::infinity();
  }
  return distance(*forward, c.dst) + distance(*backward, c.src);
}

}  // namespace piste
