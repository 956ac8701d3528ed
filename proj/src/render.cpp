// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace piste {

namespace {

double point_segment_distance(double px, double py, const Point2& a,
                              const Point2& b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((px - a.x) * vx + (py - a.y) * vy) / len2, 0.0, 1.0);
  }
  const double cx = a.x + t * vx;
  const double cy = a.y + t * vy;
  return std::hypot(px - cx, py - cy);
}

void accumulate_segment(std::vector<float>& coverage, int w, int h,
                        const Point2& a, const Point2& b, double half_width) {
  const double reach = half_width + 0.5;
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - reach)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + reach)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - reach)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + reach)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double d = point_segment_distance(x, y, a, b);
      const float cov =
          static_cast<float>(std::clamp(half_width + 0.5 - d, 0.0, 1.0));
      float& cell = coverage[static_cast<std::size_t>(y) * w + x];
      cell = std::max(cell, cov);
    }
  }
}

// 5x7 glyphs for the speed labels; each row is 5 bits, MSB left.
struct Glyph {
  char ch;
  std::uint8_t rows[7];
};

constexpr Glyph kGlyphs[] = {
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c}},
    {'/', {0x01, 0x02, 0x02, 0x04, 0x08, 0x08, 0x10}},
    {'m', {0x00, 0x00, 0x1a, 0x15, 0x15, 0x15, 0x15}},
    {'s', {0x00, 0x00, 0x0f, 0x10, 0x0e, 0x01, 0x1e}},
};

const Glyph* find_glyph(char c) {
  for (const Glyph& g : kGlyphs) {
    if (g.ch == c) return &g;
  }
  return nullptr;
}

void draw_text(std::vector<std::uint8_t>& rgb, int w, int h,
               const std::string& text, int x, int y, int scale,
               std::array<std::uint8_t, 3> color) {
  int pen = x;
  for (char c : text) {
    const Glyph* g = find_glyph(c);
    if (!g) {
      pen += 6 * scale;  // unknown characters advance as spaces
      continue;
    }
    for (int gy = 0; gy < 7; ++gy) {
      for (int gx = 0; gx < 5; ++gx) {
        if (!(g->rows[gy] & (1 << (4 - gx)))) continue;
        for (int sy = 0; sy < scale; ++sy) {
          for (int sx = 0; sx < scale; ++sx) {
            const int px = pen + gx * scale + sx;
            const int py = y + gy * scale + sy;
            if (px < 0 || py < 0 || px >= w || py >= h) continue;
            const std::size_t i = 3 * (static_cast<std::size_t>(py) * w + px);
            rgb[i] = color[0];
            rgb[i + 1] = color[1];
            rgb[i + 2] = color[2];
          }
        }
      }
    }
    pen += 6 * scale;
  }
}

}  // namespace

Frame render_polyline(const Frame& frame, std::span<const Point2> points,
                      std::array<std::uint8_t, 3> color, double line_width,
                      double point_radius) {
  if (line_width < 1.0 || point_radius < 1.0) {
    throw Error(ErrorCode::ConfigError,
                "line width and point radius must be >= 1");
  }
  if (points.empty()) {
    return frame;
  }
  const int w = frame.width();
  const int h = frame.height();
  std::vector<float> coverage(static_cast<std::size_t>(w) * h, 0.0f);
  const double half = line_width / 2.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    accumulate_segment(coverage, w, h, points[i], points[i + 1], half);
  }
  // Current-position disc at the last point.
  const Point2& last = points.back();
  const double reach = point_radius + 0.5;
  const int dx0 = std::max(0, static_cast<int>(std::floor(last.x - reach)));
  const int dx1 = std::min(w - 1, static_cast<int>(std::ceil(last.x + reach)));
  const int dy0 = std::max(0, static_cast<int>(std::floor(last.y - reach)));
  const int dy1 = std::min(h - 1, static_cast<int>(std::ceil(last.y + reach)));
  for (int y = dy0; y <= dy1; ++y) {
    for (int x = dx0; x <= dx1; ++x) {
      const double d = std::hypot(x - last.x, y - last.y);
      const float cov =
          static_cast<float>(std::clamp(point_radius + 0.5 - d, 0.0, 1.0));
      float& cell = coverage[static_cast<std::size_t>(y) * w + x];
      cell = std::max(cell, cov);
    }
  }

  std::vector<std::uint8_t> rgb = frame.rgb();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float cov = coverage[static_cast<std::size_t>(y) * w + x];
      if (cov <= 0.0f) continue;
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * w + x);
      for (int c = 0; c < 3; ++c) {
        rgb[i + c] = static_cast<std::uint8_t>(
            std::lround(rgb[i + c] * (1.0f - cov) + color[c] * cov));
      }
    }
  }
  return Frame(w, h, std::move(rgb));
}

Frame render_overlay(const Frame& frame, std::span<const Point2> smoothed,
                     const OverlayStyle& style,
                     std::span<const SpeedAnnotation> annotations) {
  Frame out = render_polyline(frame, smoothed, style.trajectory_color,
                              style.line_width, style.point_radius);
  if (annotations.empty() || style.font_scale < 1) {
    return out;
  }
  std::vector<std::uint8_t> rgb = out.rgb();
  const int stride = std::max(1, style.label_stride);
  char buf[32];
  for (std::size_t i = 0; i < annotations.size(); i += stride) {
    const SpeedAnnotation& a = annotations[i];
    std::snprintf(buf, sizeof(buf), "%.1f", a.speed_mps);
    draw_text(rgb, out.width(), out.height(), buf,
              static_cast<int>(std::lround(a.pos.x)) + 6,
              static_cast<int>(std::lround(a.pos.y)) - 7 * style.font_scale - 4,
              style.font_scale, style.trajectory_color);
  }
  return Frame(out.width(), out.height(), std::move(rgb));
}

}  // namespace piste
