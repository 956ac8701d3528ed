// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/features.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace piste {

namespace {

struct ScoreMap {
  int width = 0;
  int height = 0;
  std::vector<double> score;  // 0 outside the scored margin region

  double at(int x, int y) const {
    return score[static_cast<std::size_t>(y) * width + x];
  }
};

// Minimum eigenvalue of the gradient covariance summed over a 3x3 window.
// Gradients are 3x3 Sobel; sums fit exactly in int64.
ScoreMap shi_tomasi_scores(const Frame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  const auto& g = frame.gray();

  std::vector<std::int32_t> gx(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::int32_t> gy(gx.size(), 0);
  auto pix = [&](int x, int y) -> int {
    return g[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = (pix(x + 1, y - 1) + 2 * pix(x + 1, y) + pix(x + 1, y + 1)) -
              (pix(x - 1, y - 1) + 2 * pix(x - 1, y) + pix(x - 1, y + 1));
      gy[i] = (pix(x - 1, y + 1) + 2 * pix(x, y + 1) + pix(x + 1, y + 1)) -
              (pix(x - 1, y - 1) + 2 * pix(x, y - 1) + pix(x + 1, y - 1));
    }
  }

  ScoreMap map;
  map.width = w;
  map.height = h;
  map.score.assign(gx.size(), 0.0);
  const int margin = kDetectMargin;
  for (int y = margin; y < h - margin; ++y) {
    for (int x = margin; x < w - margin; ++x) {
      std::int64_t sxx = 0, syy = 0, sxy = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const std::size_t row = static_cast<std::size_t>(y + dy) * w + x;
        for (int dx = -1; dx <= 1; ++dx) {
          const std::int64_t ix = gx[row + dx];
          const std::int64_t iy = gy[row + dx];
          sxx += ix * ix;
          syy += iy * iy;
          sxy += ix * iy;
        }
      }
      const double trace = static_cast<double>(sxx + syy);
      const double diff = static_cast<double>(sxx - syy);
      const double root =
          std::sqrt(diff * diff + 4.0 * static_cast<double>(sxy) * sxy);
      map.score[static_cast<std::size_t>(y) * w + x] = 0.5 * (trace - root);
    }
  }
  return map;
}

struct Candidate {
  int x;
  int y;
  double score;
};

double subpixel_offset(double prev, double center, double next) {
  const double denom = prev - 2.0 * center + next;
  if (denom >= 0.0) return 0.0;  // flat or non-peak neighborhood
  const double offset = 0.5 * (prev - next) / denom;
  return std::clamp(offset, -0.5, 0.5);
}

// 256 comparison pairs within the descriptor patch, fixed at first use from
// a pinned mt19937 sequence. Offsets stay within +/-13 so the 5x5 box
// smoothing never reads outside the 31x31 patch.
struct PairTable {
  std::array<std::int8_t, kDescriptorBits> ax, ay, bx, by;
};

const PairTable& descriptor_pairs() {
  static const PairTable table = [] {
    PairTable t;
    std::mt19937 gen(0x9d2c5680u);
    auto draw = [&]() -> std::int8_t {
      return static_cast<std::int8_t>(static_cast<int>(gen() % 27) - 13);
    };
    for (int i = 0; i < kDescriptorBits; ++i) {
      do {
        t.ax[i] = draw();
        t.ay[i] = draw();
        t.bx[i] = draw();
        t.by[i] = draw();
      } while (t.ax[i] == t.bx[i] && t.ay[i] == t.by[i]);
    }
    return t;
  }();
  return table;
}

}  // namespace

std::vector<Keypoint> detect(const Frame& frame, int max_keypoints,
                             int nms_radius) {
  if (max_keypoints < 1) {
    throw Error(ErrorCode::ConfigError, "max_keypoints must be >= 1");
  }
  if (nms_radius < 1) {
    throw Error(ErrorCode::ConfigError, "nms_radius must be >= 1");
  }

  const ScoreMap map = shi_tomasi_scores(frame);
  const int w = map.width;
  const int h = map.height;

  double max_score = 0.0;
  for (double s : map.score) max_score = std::max(max_score, s);
  if (max_score <= 0.0) return {};
  const double floor = 0.01 * max_score;

  // Local maxima (>= all 8 neighbours) above the adaptive floor.
  std::vector<Candidate> candidates;
  for (int y = kDetectMargin; y < h - kDetectMargin; ++y) {
    for (int x = kDetectMargin; x < w - kDetectMargin; ++x) {
      const double s = map.at(x, y);
      if (s < floor) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (map.at(x + dx, y + dy) > s) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({x, y, s});
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.y != b.y) return a.y < b.y;
              return a.x < b.x;
            });

  // Greedy NMS with a coarse grid: a point suppresses anything within
  // Chebyshev distance nms_radius, so only the 3x3 neighbouring cells of
  // cell size nms_radius need checking.
  const int cell = nms_radius;
  const int grid_w = w / cell + 1;
  const int grid_h = h / cell + 1;
  std::vector<std::vector<int>> grid(static_cast<std::size_t>(grid_w) *
                                     grid_h);
  std::vector<Keypoint> accepted;
  accepted.reserve(std::min<std::size_t>(candidates.size(),
                                         static_cast<std::size_t>(max_keypoints)));
  std::vector<std::pair<int, int>> accepted_px;

  for (const Candidate& c : candidates) {
    if (static_cast<int>(accepted.size()) >= max_keypoints) break;
    const int cx = c.x / cell;
    const int cy = c.y / cell;
    bool blocked = false;
    for (int gy = std::max(0, cy - 1); gy <= std::min(grid_h - 1, cy + 1) && !blocked; ++gy) {
      for (int gx = std::max(0, cx - 1); gx <= std::min(grid_w - 1, cx + 1); ++gx) {
        for (int idx : grid[static_cast<std::size_t>(gy) * grid_w + gx]) {
          const auto& [px, py] = accepted_px[idx];
          if (std::max(std::abs(px - c.x), std::abs(py - c.y)) <= nms_radius) {
            blocked = true;
            break;
          }
        }
        if (blocked) break;
      }
    }
    if (blocked) continue;

    const double off_x =
        subpixel_offset(map.at(c.x - 1, c.y), c.score, map.at(c.x + 1, c.y));
    const double off_y =
        subpixel_offset(map.at(c.x, c.y - 1), c.score, map.at(c.x, c.y + 1));
    grid[static_cast<std::size_t>(cy) * grid_w + cx].push_back(
        static_cast<int>(accepted_px.size()));
    accepted_px.emplace_back(c.x, c.y);
    accepted.push_back(Keypoint{Point2{c.x + off_x, c.y + off_y}, c.score});
  }
  return accepted;
}

std::vector<Descriptor> describe(const Frame& frame,
                                 std::span<const Keypoint> kps) {
  const int w = frame.width();
  const int h = frame.height();
  const auto& g = frame.gray();

  // Summed-area table: box sums in O(1) per sample.
  std::vector<std::uint64_t> integral(
      static_cast<std::size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::uint64_t row = 0;
    for (int x = 0; x < w; ++x) {
      row += g[static_cast<std::size_t>(y) * w + x];
      integral[static_cast<std::size_t>(y + 1) * (w + 1) + (x + 1)] =
          integral[static_cast<std::size_t>(y) * (w + 1) + (x + 1)] + row;
    }
  }
  auto box5 = [&](int x, int y) -> std::uint64_t {
    const int x0 = x - 2, y0 = y - 2, x1 = x + 3, y1 = y + 3;
    return integral[static_cast<std::size_t>(y1) * (w + 1) + x1] -
           integral[static_cast<std::size_t>(y0) * (w + 1) + x1] -
           integral[static_cast<std::size_t>(y1) * (w + 1) + x0] +
           integral[static_cast<std::size_t>(y0) * (w + 1) + x0];
  };

  const PairTable& pairs = descriptor_pairs();
  std::vector<Descriptor> out;
  out.reserve(kps.size());
  for (const Keypoint& kp : kps) {
    const int cx = static_cast<int>(std::lround(kp.pos.x));
    const int cy = static_cast<int>(std::lround(kp.pos.y));
    if (cx < kPatchHalfWidth || cy < kPatchHalfWidth ||
        cx > w - 1 - kPatchHalfWidth || cy > h - 1 - kPatchHalfWidth) {
      throw Error(ErrorCode::BorderViolation,
                  "keypoint closer than " + std::to_string(kPatchHalfWidth) +
                      " px to the frame border");
    }
    Descriptor d;
    for (int i = 0; i < kDescriptorBits; ++i) {
      const std::uint64_t a = box5(cx + pairs.ax[i], cy + pairs.ay[i]);
      const std::uint64_t b = box5(cx + pairs.bx[i], cy + pairs.by[i]);
      if (a < b) {
        d.bits[i >> 6] |= (1ULL << (i & 63));
      }
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace piste
