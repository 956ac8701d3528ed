// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/spline.hpp"

#include <cmath>

namespace piste {

namespace {

// Barry-Goldman evaluation of one centripetal segment p1->p2 at parameter
// t in (t1, t2), with knots t0..t3 over the neighbourhood p0..p3.
Point2 eval_segment(const Point2& p0, const Point2& p1, const Point2& p2,
                    const Point2& p3, double t0, double t1, double t2,
                    double t3, double t) {
  auto lerp = [](const Point2& a, const Point2& b, double ta, double tb,
                 double tt) {
    const double u = (tt - ta) / (tb - ta);
    return Point2{a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u};
  };
  const Point2 a1 = lerp(p0, p1, t0, t1, t);
  const Point2 a2 = lerp(p1, p2, t1, t2, t);
  const Point2 a3 = lerp(p2, p3, t2, t3, t);
  const Point2 b1 = lerp(a1, a2, t0, t2, t);
  const Point2 b2 = lerp(a2, a3, t1, t3, t);
  return lerp(b1, b2, t1, t2, t);
}

double knot_step(const Point2& a, const Point2& b) {
  return std::sqrt(distance(a, b));  // centripetal: |dP|^(1/2)
}

}  // namespace

std::vector<Point2> catmull_rom_polyline(std::span<const Point2> controls,
                                         int samples_per_segment) {
  if (samples_per_segment < 1) {
    throw Error(ErrorCode::ConfigError, "samples_per_segment must be >= 1");
  }

  std::vector<Point2> pts;
  pts.reserve(controls.size());
  for (const Point2& p : controls) {
    if (pts.empty() || p.x != pts.back().x || p.y != pts.back().y) {
      pts.push_back(p);
    }
  }
  if (pts.size() <= 2) return pts;

  const int n = static_cast<int>(pts.size());
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n) +
              static_cast<std::size_t>(n - 1) * samples_per_segment);

  for (int i = 0; i + 1 < n; ++i) {
    const Point2& p1 = pts[i];
    const Point2& p2 = pts[i + 1];
    // Reflected ghost endpoints keep the knot spacing nonzero at the ends.
    const Point2 p0 = i > 0 ? pts[i - 1]
                            : Point2{2.0 * p1.x - p2.x, 2.0 * p1.y - p2.y};
    const Point2 p3 = i + 2 < n
                          ? pts[i + 2]
                          : Point2{2.0 * p2.x - p1.x, 2.0 * p2.y - p1.y};

    const double t0 = 0.0;
    const double t1 = t0 + knot_step(p0, p1);
    const double t2 = t1 + knot_step(p1, p2);
    const double t3 = t2 + knot_step(p2, p3);

    out.push_back(p1);
    for (int j = 1; j <= samples_per_segment; ++j) {
      const double u =
          static_cast<double>(j) / static_cast<double>(samples_per_segment + 1);
      const double t = t1 + (t2 - t1) * u;
      out.push_back(eval_segment(p0, p1, p2, p3, t0, t1, t2, t3, t));
    }
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace piste
