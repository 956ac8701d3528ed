// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "piste/geometry.hpp"
#include "piste/random.hpp"
#include "test_util.hpp"

using namespace piste;

TEST_CASE("apply_homography identity and translation") {
  const Point2 p = apply_homography(Homography{}, Point2{5.0, 7.0});
  CHECK(p.x == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(7.0).epsilon(1e-12));

  const Point2 q = apply_homography(translation(3.0, -2.0), Point2{0.0, 0.0});
  CHECK(q.x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(q.y == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("apply_homography projective division") {
  Homography h;
  h.m << 1, 0, 0, 0, 1, 0, 0.01, 0, 1;
  const Point2 p = apply_homography(h, Point2{100.0, 50.0});  // w' = 2
  CHECK(p.x == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("apply_homography horizon crossing") {
  Homography h;
  h.m << 1, 0, 0, 0, 1, 0, -0.01, 0, 1;  // w' = 0 at x = 100
  CHECK(!try_apply_homography(h, Point2{100.0, 3.0}).has_value());
  CHECK_THROWS_AS(apply_homography(h, Point2{100.0, 3.0}), Error);
  try {
    apply_homography(h, Point2{100.0, 3.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PointAtInfinity);
  }
}

TEST_CASE("compose on translations and identity") {
  const Homography id = compose(Homography{}, Homography{});
  CHECK((id.m - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));

  const Homography t = compose(translation(1.0, 0.0), translation(0.0, 1.0));
  CHECK(t.m(0, 2) == doctest::Approx(1.0));
  CHECK(t.m(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("compose matches sequential application on sampled points") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Homography h1 = testutil::random_homography(rng);
    const Homography h2 = testutil::random_homography(rng);
    const Homography h21 = compose(h2, h1);
    for (int i = 0; i < 100; ++i) {
      const Point2 p = testutil::random_point(rng);
      const Point2 sequential = apply_homography(h2, apply_homography(h1, p));
      const Point2 composed = apply_homography(h21, p);
      CHECK(distance(sequential, composed) < 1e-9);
    }
  }
}

TEST_CASE("compose is associative on sampled points") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Homography a = testutil::random_homography(rng);
    const Homography b = testutil::random_homography(rng);
    const Homography c = testutil::random_homography(rng);
    const Homography left = compose(compose(a, b), c);
    const Homography right = compose(a, compose(b, c));
    for (int i = 0; i < 50; ++i) {
      const Point2 p = testutil::random_point(rng);
      CHECK(distance(apply_homography(left, p), apply_homography(right, p)) <
            1e-8);
    }
  }
}

TEST_CASE("invert identity and translation") {
  const Homography id = invert(Homography{});
  CHECK((id.m - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));

  const Homography it = invert(translation(3.0, -2.0));
  CHECK(it.m(0, 2) == doctest::Approx(-3.0));
  CHECK(it.m(1, 2) == doctest::Approx(2.0));
}

TEST_CASE("invert round-trips points") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Homography h = testutil::random_homography(rng);
    const Homography hi = invert(h);
    for (int i = 0; i < 100; ++i) {
      const Point2 p = testutil::random_point(rng);
      const Point2 back = apply_homography(hi, apply_homography(h, p));
      CHECK(distance(p, back) < 1e-9);
    }
  }
}

TEST_CASE("invert rejects singular matrices") {
  Homography h;
  h.m << 1, 2, 3, 2, 4, 6, 0, 0, 1;  // rank 2 upper block
  h.m(2, 2) = 1.0;
  h.m.row(1) = 2.0 * h.m.row(0);
  CHECK_THROWS_AS(invert(h), Error);
  try {
    invert(h);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("canonicalization is idempotent on 1000 random homographies") {
  Rng rng(53);
  for (int trial = 0; trial < 1000; ++trial) {
    Homography raw = testutil::random_homography(rng);
    raw.m *= rng.uniform(0.1, 10.0);  // arbitrary scale representative
    const Homography once = canonical(raw);
    const Homography twice = canonical(once);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(once.m(r, c) == twice.m(r, c));  // bitwise
      }
    }
  }
}

TEST_CASE("application is scale invariant") {
  Rng rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const Homography h = testutil::random_homography(rng);
    Homography scaled;
    scaled.m = 2.0 * h.m;
    for (int i = 0; i < 20; ++i) {
      const Point2 p = testutil::random_point(rng);
      const Point2 a = apply_homography(h, p);
      const Point2 b = apply_homography(scaled, p);
      CHECK(distance(a, b) < 1e-12);
    }
  }
}

TEST_CASE("dlt recovers identity from unit square") {
  const std::vector<Correspondence> corrs = {
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{1, 1}, {1, 1}}, {{0, 1}, {0, 1}}};
  const Homography h = dlt_homography(corrs);
  CHECK((h.m - Eigen::Matrix3d::Identity()).norm() < 1e-9);
}

TEST_CASE("dlt recovers a known translation") {
  const Homography truth = translation(5.0, 3.0);
  std::vector<Correspondence> corrs;
  for (const Point2 p :
       {Point2{10, 20}, Point2{200, 30}, Point2{180, 240}, Point2{15, 200}}) {
    corrs.push_back({p, apply_homography(truth, p)});
  }
  const Homography h = dlt_homography(corrs);
  CHECK((h.m - truth.m).norm() < 1e-9);
}

TEST_CASE("dlt raises on collinear configurations and short input") {
  const std::vector<Correspondence> collinear = {
      {{0, 0}, {0, 0}}, {{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}, {{5, 0}, {5, 0}}};
  CHECK_THROWS_AS(dlt_homography(collinear), Error);
  try {
    dlt_homography(collinear);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateConfiguration);
  }

  const std::vector<Correspondence> three = {
      {{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}};
  try {
    dlt_homography(three);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientData);
  }
}

TEST_CASE("dlt exactness over randomized well-conditioned homographies") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Homography truth = testutil::random_homography(rng);
    const auto corrs = testutil::correspondences_from(truth, rng, 8);
    const Homography fitted = dlt_homography(corrs);
    for (const auto& c : corrs) {
      CHECK(symmetric_transfer_error(fitted, c) < 1e-6);
    }
  }
}

TEST_CASE("symmetric transfer error basics") {
  const Homography t = translation(4.0, -1.0);
  const Correspondence exact{{10, 10}, apply_homography(t, {10, 10})};
  CHECK(symmetric_transfer_error(t, exact) < 1e-9);

  const Correspondence off{{0, 0}, {3, 4}};
  CHECK(symmetric_transfer_error(Homography{}, off) ==
        doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("symmetric transfer error returns infinity at the horizon") {
  Homography h;
  h.m << 1, 0, 0, 0, 1, 0, -0.01, 0, 1;
  const Correspondence c{{100.0, 3.0}, {50.0, 50.0}};
  CHECK(std::isinf(symmetric_transfer_error(h, c)));
}
