// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "piste/geometry.hpp"

namespace piste {

// Centripetal Catmull-Rom polyline through the control points. Control
// points are emitted verbatim; `samples_per_segment` interpolated points are
// inserted between each consecutive pair. Inputs with <= 2 distinct points
// come back unchanged. Consecutive duplicate controls are collapsed first
// (the centripetal parameterization needs distinct knots).
std::vector<Point2> catmull_rom_polyline(std::span<const Point2> controls,
                                         int samples_per_segment);

}  // namespace piste
