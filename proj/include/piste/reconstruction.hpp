// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "piste/frame.hpp"
#include "piste/masking.hpp"
#include "piste/matching.hpp"
#include "piste/robust.hpp"
#include "piste/tracking.hpp"

namespace piste {

enum class PointFlag : std::uint8_t {
  measured,      // footpoint from a tracked box
  interpolated,  // tracker lost / track-file gap; previous box reused
  off_horizon,   // left the projective horizon; kept but never rendered
};

const char* point_flag_name(PointFlag flag);
PointFlag point_flag_from_name(const std::string& name);  // ParseError

/// The athlete's path so far, expressed in the coordinate system of
/// `frame_index` (one point per processed frame).
struct Trajectory {
  std::vector<Point2> points;
  std::vector<PointFlag> flags;
  int frame_index = 0;
};

/// Frame-aligned speed samples (m/s) covering a contiguous frame range.
struct SpeedSeries {
  int start_frame = 0;
  std::vector<double> speed_mps;

  std::optional<double> at(int frame) const {
    const int i = frame - start_frame;
    if (i < 0 || i >= static_cast<int>(speed_mps.size())) return std::nullopt;
    return speed_mps[i];
  }
};

// CSV schema: optional header "frame,speed_mps"; contiguous increasing
// frames; non-negative speeds.
SpeedSeries load_speed_csv(const std::filesystem::path& path);

// CSV schema: optional header "ref_frame,other_frame".
std::vector<std::pair<int, int>> load_pairing_csv(
    const std::filesystem::path& path);

struct FrameDiagnostics {
  int frame = 0;
  Homography pair_h;  // maps frame-1 coordinates to this frame; identity at
                      // frame 0 and on bridged frames
  int match_count = 0;
  int inlier_count = 0;
  bool bridged = false;
  bool tracker_lost = false;
  BBox box;
};

struct EngineConfig {
  int max_keypoints = 1024;
  int nms_radius = 8;
  int match_max_distance = 64;
  double match_ratio = 0.8;
  int min_matches = 8;       // below this the frame pair is bridged
  double bbox_margin = 8.0;  // athlete box inflation for keypoint exclusion
  RansacConfig ransac;
  SnowFilterConfig snow;
  std::optional<StaticMask> static_mask;
};

/// Everything needed to re-derive the trajectory in any processed frame:
/// raw per-frame footpoints (each in its own frame's coordinates) plus the
/// chain of pair homographies. This is what the export file carries.
struct RunRecord {
  struct Pair {
    Homography h;  // frame-1 -> frame
    int match_count = 0;
    int inlier_count = 0;
    bool bridged = false;
  };

  int width = 0;
  int height = 0;
  std::vector<Point2> points;  // raw footpoints, own-frame coordinates
  std::vector<PointFlag> flags;
  std::vector<Pair> pairs;  // pairs[t-1] maps frame t-1 into frame t

  int frame_count() const { return static_cast<int>(points.size()); }

  // Points 0..frame chained into frame's coordinate system.
  Trajectory trajectory_at(int frame) const;
};

/// Online reconstruction engine: per frame it tracks the athlete, matches
/// static keypoints against the cached previous frame, estimates the pair
/// homography, re-maps the accumulated trajectory and appends the new
/// footpoint. When a pair yields no estimable model the engine bridges with
/// the identity map and flags the frame rather than dropping it.
///
/// Single-owner; frames must arrive in strict order. Distinct engines are
/// independent.
class Engine {
 public:
  // Built-in template tracker seeded with b0.
  Engine(const Frame& frame0, const BBox& b0, EngineConfig cfg);

  // External per-frame boxes; the table must contain frame 0.
  Engine(const Frame& frame0, const TrackTable& boxes, EngineConfig cfg);

  const Trajectory& step(const Frame& frame);

  const Trajectory& trajectory() const { return traj_; }
  std::span<const FrameDiagnostics> diagnostics() const { return diags_; }
  std::span<const Point2> raw_footpoints() const { return raw_points_; }
  std::span<const PointFlag> raw_flags() const { return raw_flags_; }
  int frame_index() const { return t_; }
  const EngineConfig& config() const { return cfg_; }

  RunRecord record() const;

 private:
  struct FrameFeatures {
    std::vector<Keypoint> kps;
    std::vector<Descriptor> descs;
  };

  void init(const Frame& frame0, const BBox& b0);
  BBox advance_box(const Frame& frame, bool& lost);
  FrameFeatures masked_features(const Frame& frame, const BBox& box) const;

  EngineConfig cfg_;
  int width_ = 0;
  int height_ = 0;
  std::optional<TemplateTracker> tracker_;
  std::optional<TrackTable> table_;
  BBox box_;
  FrameFeatures prev_features_;
  Trajectory traj_;
  std::vector<FrameDiagnostics> diags_;
  std::vector<Point2> raw_points_;
  std::vector<PointFlag> raw_flags_;
  int t_ = 0;
};

// Render-time smoothing: centripetal Catmull-Rom through the usable
// (non-off-horizon) points. The stored trajectory itself is never altered.
std::vector<Point2> smooth(const Trajectory& traj, int samples_per_segment);

std::vector<std::pair<Point2, double>> annotate_speed(
    const Trajectory& traj, const SpeedSeries& speeds);

enum class OverlayStatus : std::uint8_t { ok, no_pairing, no_consensus };

const char* overlay_status_name(OverlayStatus s);

/// One reference frame's view of the other athlete's trajectory.
struct OverlayFrame {
  int ref_frame = -1;
  int other_frame = -1;
  OverlayStatus status = OverlayStatus::no_pairing;
  Homography other_to_ref;
  int match_count = 0;
  int inlier_count = 0;
  std::vector<Point2> points;  // other trajectory in ref-frame coordinates
  std::vector<PointFlag> flags;
};

using FrameProvider = std::function<Frame(int)>;

/// For every reference frame with a pairing entry, estimates the homography
/// between the time-paired frames with the same feature/match/consensus
/// pipeline and maps the other run's trajectory into the reference frame.
/// Frames without a pairing entry, or whose pair reaches no consensus, come
/// back flagged instead of silently dropped.
std::vector<OverlayFrame> compare_runs(
    const FrameProvider& ref_frames, int ref_count,
    const FrameProvider& other_frames, int other_count,
    const RunRecord& other_record,
    std::span<const std::pair<int, int>> pairing, const EngineConfig& cfg);

}  // namespace piste
