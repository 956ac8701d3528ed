// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/masking.hpp"

#include <algorithm>
#include <cmath>

namespace piste {

std::vector<Keypoint> filter_bbox(std::span<const Keypoint> kps,
                                  const BBox& bbox, double margin) {
  if (margin < 0.0) {
    throw Error(ErrorCode::ConfigError, "margin must be >= 0");
  }
  const double x0 = bbox.x - margin;
  const double y0 = bbox.y - margin;
  const double x1 = bbox.x + bbox.w + margin;
  const double y1 = bbox.y + bbox.h + margin;
  std::vector<Keypoint> out;
  out.reserve(kps.size());
  for (const Keypoint& kp : kps) {
    const bool inside = kp.pos.x >= x0 && kp.pos.x <= x1 && kp.pos.y >= y0 &&
                        kp.pos.y <= y1;
    if (!inside) out.push_back(kp);
  }
  return out;
}

std::vector<Keypoint> filter_static_mask(std::span<const Keypoint> kps,
                                         const StaticMask& mask,
                                         int frame_width, int frame_height) {
  if (mask.width != frame_width || mask.height != frame_height) {
    throw Error(ErrorCode::DimensionMismatch,
                "mask is " + std::to_string(mask.width) + "x" +
                    std::to_string(mask.height) + ", frame is " +
                    std::to_string(frame_width) + "x" +
                    std::to_string(frame_height));
  }
  std::vector<Keypoint> out;
  out.reserve(kps.size());
  for (const Keypoint& kp : kps) {
    const int x = static_cast<int>(std::lround(kp.pos.x));
    const int y = static_cast<int>(std::lround(kp.pos.y));
    if (!mask.excluded(x, y)) out.push_back(kp);
  }
  return out;
}

std::vector<Keypoint> filter_snow(std::span<const Keypoint> kps,
                                  const Frame& frame,
                                  const SnowFilterConfig& cfg) {
  if (cfg.min_channel < 0 || cfg.min_channel > 255 || cfg.max_spread < 0 ||
      cfg.max_spread > 255) {
    throw Error(ErrorCode::ConfigError,
                "snow filter thresholds must be in [0, 255]");
  }
  if (!cfg.enabled) return {kps.begin(), kps.end()};

  std::vector<Keypoint> out;
  out.reserve(kps.size());
  for (const Keypoint& kp : kps) {
    const int cx = static_cast<int>(std::lround(kp.pos.x));
    const int cy = static_cast<int>(std::lround(kp.pos.y));
    int whitish = 0;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = cx + dx;
        const int y = cy + dy;
        if (x < 0 || y < 0 || x >= frame.width() || y >= frame.height()) {
          continue;  // out-of-frame neighbours do not count as whitish
        }
        const auto px = frame.pixel(x, y);
        const int lo = std::min({px[0], px[1], px[2]});
        const int hi = std::max({px[0], px[1], px[2]});
        if (lo >= cfg.min_channel && hi - lo <= cfg.max_spread) ++whitish;
      }
    }
    if (whitish < 5) out.push_back(kp);
  }
  return out;
}

}  // namespace piste
