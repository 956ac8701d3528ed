// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/matching.hpp"

#include <algorithm>

namespace piste {

std::vector<Match> match_descriptors(std::span<const Descriptor> desc_prev,
                                     std::span<const Descriptor> desc_curr,
                                     int max_distance, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "ratio must be in (0, 1]");
  }
  if (max_distance < 0 || max_distance > kDescriptorBits) {
    throw Error(ErrorCode::ConfigError, "max_distance must be in [0, 256]");
  }
  const int n = static_cast<int>(desc_prev.size());
  const int m = static_cast<int>(desc_curr.size());
  if (n == 0 || m == 0) return {};

  // Nearest curr index per prev descriptor (ties -> lowest index), plus the
  // second-nearest distance for the ratio test.
  std::vector<int> best_curr(n, -1);
  std::vector<int> best_dist(n, kDescriptorBits + 1);
  std::vector<int> second_dist(n, kDescriptorBits + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const int d = hamming(desc_prev[i], desc_curr[j]);
      if (d < best_dist[i]) {
        second_dist[i] = best_dist[i];
        best_dist[i] = d;
        best_curr[i] = j;
      } else if (d < second_dist[i]) {
        second_dist[i] = d;
      }
    }
  }

  // Nearest prev index per curr descriptor (ties -> lowest index).
  std::vector<int> best_prev(m, -1);
  std::vector<int> best_prev_dist(m, kDescriptorBits + 1);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const int d = hamming(desc_prev[i], desc_curr[j]);
      if (d < best_prev_dist[j]) {
        best_prev_dist[j] = d;
        best_prev[j] = i;
      }
    }
  }

  std::vector<Match> out;
  for (int i = 0; i < n; ++i) {
    const int j = best_curr[i];
    if (j < 0 || best_dist[i] > max_distance) continue;
    if (best_prev[j] != i) continue;  // not mutual
    const bool has_second = m > 1 && second_dist[i] <= kDescriptorBits;
    if (has_second &&
        !(static_cast<double>(best_dist[i]) < ratio * second_dist[i])) {
      continue;
    }
    out.push_back(Match{i, j, best_dist[i]});
  }

  std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.idx_prev != b.idx_prev) return a.idx_prev < b.idx_prev;
    return a.idx_curr < b.idx_curr;
  });
  return out;
}

}  // namespace piste
