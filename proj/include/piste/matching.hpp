// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "piste/features.hpp"

namespace piste {

struct Match {
  int idx_prev = -1;
  int idx_curr = -1;
  int distance = 0;  // Hamming
};

/// Mutual-nearest-neighbour matching with a ratio test on the prev->curr
/// direction: a pair survives when each side is the other's nearest
/// neighbour, the distance is <= max_distance, and nearest/second-nearest
/// < ratio (it passes automatically when only one candidate exists).
/// One-to-one by construction; sorted by distance, then (idx_prev, idx_curr).
std::vector<Match> match_descriptors(std::span<const Descriptor> desc_prev,
                                     std::span<const Descriptor> desc_curr,
                                     int max_distance = 64,
                                     double ratio = 0.8);

}  // namespace piste
