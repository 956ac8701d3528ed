// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "piste/frame.hpp"
#include "piste/reconstruction.hpp"

namespace piste {

/// Constant per-frame camera motion, expressed as the viewport transform
/// applied each frame in pixel space. Sign conventions (documented because
/// they trip people up): `pan` moves the camera, so rendered content moves
/// the opposite way and the ground-truth pair homography is the inverse
/// translation; `zoom` scales the viewport footprint, so zoom > 1 widens
/// the view and content shrinks by 1/zoom. Rotation and tilt are anchored
/// at the frame center.
struct CameraMotion {
  double pan_x = 0.0;   // pixels per frame
  double pan_y = 0.0;
  double zoom = 1.0;    // viewport scale factor per frame (> 0)
  double rotate = 0.0;  // radians per frame
  double tilt_x = 0.0;  // projective row increment per frame
  double tilt_y = 0.0;
};

/// A planar textured world sampled through a scripted camera. Markers are
/// high-contrast rectangles, crosses and gate-like pole pairs; the optional
/// whitish region is flat snow-like cover laid out as periodic horizontal
/// lanes totalling `whitish_fraction` of the world area, so any viewport
/// sees roughly that fraction. The region carries faint camera-attached
/// speckle: the sparkle does not move with the world, which is what makes
/// unfiltered snow texture poison the homography estimate.
struct SceneConfig {
  int frames = 60;
  int frame_width = 640;
  int frame_height = 360;
  int world_width = 2048;
  int world_height = 1536;
  std::uint64_t seed = 1;
  int marker_count = 50;
  double noise_amplitude = 14.0;    // world background texture
  double whitish_fraction = 0.0;    // 0 disables the band; max 0.7
  double speckle_amplitude = 0.0;   // frame-attached sparkle in the band
  Point2 athlete_start{400.0, 300.0};    // world coordinates of the footpoint
  Point2 athlete_velocity{4.0, 2.0};     // world units per frame
  double athlete_box_w = 36.0;           // box size in frame pixels
  double athlete_box_h = 64.0;
  std::optional<Point2> view_center;     // world point at frame center; default world center
  double view_scale = 1.0;               // world units per pixel at t=0
  CameraMotion motion;
};

// Plain-text key=value file; see the README for the schema.
SceneConfig load_scene_config(const std::filesystem::path& path);

/// Exact per-frame truth: pair_h[t] maps frame t pixels into frame t+1,
/// boxes/footpoints are in each frame's own coordinates, and every
/// footpoint equals footpoint(box) exactly.
struct GroundTruth {
  std::vector<Homography> pair_h;   // size frames-1
  std::vector<BBox> boxes;          // size frames
  std::vector<Point2> footpoints;   // size frames
};

/// Deterministic random-access renderer: frames need not be held in memory.
class SceneRenderer {
 public:
  explicit SceneRenderer(const SceneConfig& cfg);  // throws ConfigError

  int frame_count() const { return cfg_.frames; }
  int width() const { return cfg_.frame_width; }
  int height() const { return cfg_.frame_height; }
  const GroundTruth& truth() const { return truth_; }

  Frame render(int t) const;

  // Exact camera maps, pixel <-> world, for oracle-style checks.
  const Eigen::Matrix3d& world_from_frame(int t) const {
    return pix2world_.at(t);
  }
  const Eigen::Matrix3d& frame_from_world(int t) const {
    return world2pix_.at(t);
  }

 private:
  bool whitish_at(double world_y) const;

  SceneConfig cfg_;
  GroundTruth truth_;
  std::vector<std::uint8_t> world_;      // world canvas RGB
  std::vector<Eigen::Matrix3d> pix2world_;  // per frame
  std::vector<Eigen::Matrix3d> world2pix_;
};

struct SyntheticSequence {
  std::vector<Frame> frames;
  GroundTruth truth;
};

// Convenience wrapper materializing every frame; prefer SceneRenderer for
// long sequences.
SyntheticSequence generate_scene(const SceneConfig& cfg);

struct ErrorReport {
  double mean_px = 0.0;
  double max_px = 0.0;
  std::vector<double> per_frame;
};

/// Per-point displacement between the reconstructed trajectory (in its final
/// frame's coordinates) and the ground-truth footpoints chained into that
/// same frame. Throws LengthMismatch when the frame counts differ.
ErrorReport measure_error(const Trajectory& reconstructed,
                          const GroundTruth& truth);

}  // namespace piste
