// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>

#include "piste/frame.hpp"
#include "piste/geometry.hpp"

namespace piste {

struct OverlayStyle {
  std::array<std::uint8_t, 3> trajectory_color{220, 30, 30};  // red track
  std::array<std::uint8_t, 3> comparison_color{40, 190, 60};  // green track
  double line_width = 3.0;
  double point_radius = 5.0;
  int font_scale = 2;      // integer scale of the 5x7 label glyphs
  int label_stride = 12;   // draw every k-th speed annotation
};

struct SpeedAnnotation {
  Point2 pos;
  double speed_mps = 0.0;
};

// Anti-aliased polyline plus a disc at the last point, clipped to the
// frame. The input frame is untouched; an empty polyline returns an
// identical copy.
Frame render_polyline(const Frame& frame, std::span<const Point2> points,
                      std::array<std::uint8_t, 3> color, double line_width,
                      double point_radius);

// Trajectory overlay in the primary color, with optional speed labels.
Frame render_overlay(const Frame& frame, std::span<const Point2> smoothed,
                     const OverlayStyle& style,
                     std::span<const SpeedAnnotation> annotations = {});

}  // namespace piste
