// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/robust.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "piste/random.hpp"

namespace piste {

namespace {

double triangle_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// True when any 3 of the 4 sampled correspondences are (near-)collinear in
// either image; such samples give numerically useless DLT systems.
bool sample_degenerate(std::span<const Correspondence> corrs,
                       const std::array<int, 4>& idx, double min_area) {
  static constexpr int kTriples[4][3] = {
      {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : kTriples) {
    const Correspondence& a = corrs[idx[t[0]]];
    const Correspondence& b = corrs[idx[t[1]]];
    const Correspondence& c = corrs[idx[t[2]]];
    if (triangle_area(a.src, b.src, c.src) < min_area) return true;
    if (triangle_area(a.dst, b.dst, c.dst) < min_area) return true;
  }
  return false;
}

struct Consensus {
  std::vector<std::uint8_t> flags;
  int count = 0;
  double mean_error = 0.0;
};

Consensus score_model(const Homography& h,
                      std::span<const Correspondence> corrs,
                      double threshold) {
  Consensus out;
  out.flags.assign(corrs.size(), 0);
  const TransferScorer scorer(h);
  double sum = 0.0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const double err = scorer(corrs[i]);
    if (err <= threshold) {
      out.flags[i] = 1;
      ++out.count;
      sum += err;
    }
  }
  out.mean_error = out.count > 0 ? sum / out.count : 0.0;
  return out;
}

bool better(const Consensus& a, const Consensus& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.mean_error < b.mean_error;
}

// Number of iterations needed to hit an all-inlier sample with the given
// confidence, for inlier ratio w.
int adaptive_iterations(double confidence, double w, int cap) {
  if (w >= 1.0) return 0;
  const double w4 = w * w * w * w;
  if (w4 <= 0.0) return cap;
  const double denom = std::log1p(-w4);
  if (denom >= 0.0) return cap;
  const double need = std::log1p(-confidence) / denom;
  if (need >= static_cast<double>(cap)) return cap;
  return static_cast<int>(std::ceil(need));
}

}  // namespace

RansacResult estimate_homography(std::span<const Correspondence> corrs,
                                 const RansacConfig& cfg) {
  const int n = static_cast<int>(corrs.size());
  if (n < 4) {
    throw Error(ErrorCode::InsufficientData,
                "need >= 4 correspondences, got " + std::to_string(n));
  }
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    throw Error(ErrorCode::ConfigError, "confidence must be in (0, 1)");
  }
  if (cfg.max_iterations < 1 || cfg.min_inliers < 4) {
    throw Error(ErrorCode::ConfigError,
                "max_iterations >= 1 and min_inliers >= 4 required");
  }

  Rng rng(cfg.seed);
  Homography best_h;
  Consensus best;
  bool have_model = false;
  bool any_valid_sample = false;

  int limit = cfg.max_iterations;
  int it = 0;
  for (; it < limit; ++it) {
    // Minimal sample of 4 distinct indices.
    std::array<int, 4> idx{};
    for (int k = 0; k < 4;) {
      const int candidate = static_cast<int>(rng.uniform_u32(
          static_cast<std::uint32_t>(n)));
      bool dup = false;
      for (int j = 0; j < k; ++j) dup |= idx[j] == candidate;
      if (!dup) idx[k++] = candidate;
    }
    if (sample_degenerate(corrs, idx, cfg.degeneracy_area)) continue;

    const std::array<Correspondence, 4> sample = {corrs[idx[0]], corrs[idx[1]],
                                                  corrs[idx[2]], corrs[idx[3]]};
    Homography h;
    try {
      h = dlt_homography(std::span<const Correspondence>(sample), cfg.sv_ratio);
    } catch (const Error&) {
      continue;  // numerically degenerate despite the area test
    }
    if (!is_invertible(h)) continue;
    any_valid_sample = true;

    const Consensus c = score_model(h, corrs, cfg.inlier_threshold);
    if (!have_model || better(c, best)) {
      best = c;
      best_h = h;
      have_model = true;
      const double w = static_cast<double>(c.count) / n;
      limit = std::min(limit,
                       std::max(it + 1, adaptive_iterations(cfg.confidence, w,
                                                            cfg.max_iterations)));
    }
  }

  if (!any_valid_sample) {
    throw Error(ErrorCode::AllDegenerate,
                "every sampled quadruple was degenerate");
  }
  if (!have_model || best.count < cfg.min_inliers) {
    throw Error(ErrorCode::NoConsensus,
                "best consensus " + std::to_string(best.count) +
                    " below min_inliers " + std::to_string(cfg.min_inliers));
  }

  // Local optimization: full-inlier DLT refits with re-evaluation. A round
  // that loses inliers is discarded, keeping the count monotone.
  for (int round = 0; round < cfg.lo_refit_rounds; ++round) {
    std::vector<Correspondence> inliers;
    inliers.reserve(best.count);
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      if (best.flags[i]) inliers.push_back(corrs[i]);
    }
    if (inliers.size() < 4) break;
    Homography refit;
    try {
      refit = dlt_homography(inliers, cfg.sv_ratio);
    } catch (const Error&) {
      break;
    }
    if (!is_invertible(refit)) break;
    const Consensus c = score_model(refit, corrs, cfg.inlier_threshold);
    if (c.count > best.count ||
        (c.count == best.count && c.mean_error <= best.mean_error)) {
      best = c;
      best_h = refit;
    } else {
      break;
    }
  }

  RansacResult result;
  result.h = best_h;
  result.inlier_flags = std::move(best.flags);
  result.iterations_used = it;
  result.mean_inlier_error = best.mean_error;
  return result;
}

}  // namespace piste
