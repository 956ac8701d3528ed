// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/reconstruction.hpp"

#include <algorithm>
#include <fstream>

#include "piste/random.hpp"
#include "piste/spline.hpp"

namespace piste {

const char* point_flag_name(PointFlag flag) {
  switch (flag) {
    case PointFlag::measured: return "measured";
    case PointFlag::interpolated: return "interpolated";
    case PointFlag::off_horizon: return "off_horizon";
  }
  return "unknown";
}

PointFlag point_flag_from_name(const std::string& name) {
  if (name == "measured") return PointFlag::measured;
  if (name == "interpolated") return PointFlag::interpolated;
  if (name == "off_horizon") return PointFlag::off_horizon;
  throw Error(ErrorCode::ParseError, "unknown point flag '" + name + "'");
}

const char* overlay_status_name(OverlayStatus s) {
  switch (s) {
    case OverlayStatus::ok: return "ok";
    case OverlayStatus::no_pairing: return "no_pairing";
    case OverlayStatus::no_consensus: return "no_consensus";
  }
  return "unknown";
}

namespace {

// Shared CSV row reader: strips comments/blank lines, handles the optional
// header, yields parsed numeric fields.
std::vector<std::vector<double>> read_csv_rows(
    const std::filesystem::path& path, const std::string& header,
    std::size_t fields) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    if (first_content) {
      first_content = false;
      std::string compact;
      for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
      }
      if (compact == header) continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    int column = 1;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string field = line.substr(
          start,
          comma == std::string::npos ? std::string::npos : comma - start);
      const auto fb = field.find_first_not_of(" \t\r");
      if (fb == std::string::npos) {
        throw Error(ErrorCode::ParseError,
                    "empty field at line " + std::to_string(line_no) +
                        ", column " + std::to_string(column));
      }
      const auto fe = field.find_last_not_of(" \t\r");
      field = field.substr(fb, fe - fb + 1);
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(field, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != field.size()) {
        throw Error(ErrorCode::ParseError,
                    "bad number '" + field + "' at line " +
                        std::to_string(line_no) + ", column " +
                        std::to_string(column));
      }
      row.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++column;
    }
    if (row.size() != fields) {
      throw Error(ErrorCode::ParseError,
                  "expected " + std::to_string(fields) + " fields at line " +
                      std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int require_int(double v, const char* what) {
  if (v < 0.0 || v != std::floor(v)) {
    throw Error(ErrorCode::ParseError,
                std::string(what) + " must be a non-negative integer");
  }
  return static_cast<int>(v);
}

}  // namespace

SpeedSeries load_speed_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path, "frame,speed_mps", 2);
  SpeedSeries series;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int frame = require_int(rows[i][0], "frame");
    const double speed = rows[i][1];
    if (speed < 0.0) {
      throw Error(ErrorCode::ParseError, "speed must be non-negative");
    }
    if (i == 0) {
      series.start_frame = frame;
    } else if (frame != series.start_frame + static_cast<int>(i)) {
      throw Error(ErrorCode::ParseError,
                  "speed series must cover a contiguous frame range");
    }
    series.speed_mps.push_back(speed);
  }
  return series;
}

std::vector<std::pair<int, int>> load_pairing_csv(
    const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path, "ref_frame,other_frame", 2);
  std::vector<std::pair<int, int>> pairing;
  pairing.reserve(rows.size());
  for (const auto& row : rows) {
    pairing.emplace_back(require_int(row[0], "ref_frame"),
                         require_int(row[1], "other_frame"));
  }
  return pairing;
}

Trajectory RunRecord::trajectory_at(int frame) const {
  if (frame < 0 || frame >= frame_count()) {
    throw Error(ErrorCode::LengthMismatch,
                "frame " + std::to_string(frame) + " outside the run");
  }
  Trajectory out;
  out.frame_index = frame;
  out.points.reserve(frame + 1);
  out.flags.reserve(frame + 1);
  for (int i = 0; i <= frame; ++i) {
    Point2 p = points[i];
    PointFlag flag = flags[i];
    for (int j = i; j < frame && flag != PointFlag::off_horizon; ++j) {
      if (const auto mapped = try_apply_homography(pairs[j].h, p)) {
        p = *mapped;
      } else {
        flag = PointFlag::off_horizon;
      }
    }
    out.points.push_back(p);
    out.flags.push_back(flag);
  }
  return out;
}

Engine::Engine(const Frame& frame0, const BBox& b0, EngineConfig cfg)
    : cfg_(std::move(cfg)) {
  tracker_.emplace(frame0, b0);  // validates the box
  init(frame0, tracker_->box());
}

Engine::Engine(const Frame& frame0, const TrackTable& boxes, EngineConfig cfg)
    : cfg_(std::move(cfg)), table_(boxes) {
  const auto b0 = table_->at(0);
  if (!b0) {
    throw Error(ErrorCode::InvalidBox, "track table must contain frame 0");
  }
  init(frame0, *b0);
}

void Engine::init(const Frame& frame0, const BBox& b0) {
  width_ = frame0.width();
  height_ = frame0.height();
  if (!(b0.w > 0.0 && b0.h > 0.0) || b0.x + b0.w <= 0.0 || b0.x >= width_ ||
      b0.y + b0.h <= 0.0 || b0.y >= height_) {
    throw Error(ErrorCode::InvalidBox,
                "initial box must be positive-sized and intersect the frame");
  }
  if (cfg_.static_mask &&
      (cfg_.static_mask->width != width_ || cfg_.static_mask->height != height_)) {
    throw Error(ErrorCode::DimensionMismatch,
                "static mask dimensions do not match the frames");
  }
  box_ = b0;
  traj_.points.push_back(footpoint(b0));
  traj_.flags.push_back(PointFlag::measured);
  traj_.frame_index = 0;
  raw_points_ = traj_.points;
  raw_flags_ = traj_.flags;
  prev_features_ = masked_features(frame0, b0);
  diags_.push_back(FrameDiagnostics{0, Homography{}, 0, 0, false, false, b0});
}

Engine::FrameFeatures Engine::masked_features(const Frame& frame,
                                              const BBox& box) const {
  FrameFeatures out;
  out.kps = detect(frame, cfg_.max_keypoints, cfg_.nms_radius);
  out.kps = filter_bbox(out.kps, box, cfg_.bbox_margin);
  if (cfg_.static_mask) {
    out.kps = filter_static_mask(out.kps, *cfg_.static_mask, frame.width(),
                                 frame.height());
  }
  out.kps = filter_snow(out.kps, frame, cfg_.snow);
  out.descs = describe(frame, out.kps);
  return out;
}

BBox Engine::advance_box(const Frame& frame, bool& lost) {
  lost = false;
  if (tracker_) {
    try {
      return tracker_->track(frame);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LostTarget) throw;
      lost = true;
      return box_;
    }
  }
  const auto entry = table_->at(t_);
  if (!entry) {
    lost = true;  // declared gap: reuse the previous box
    return box_;
  }
  const BBox& b = *entry;
  if (!(b.w > 0.0 && b.h > 0.0) || b.x + b.w <= 0.0 || b.x >= width_ ||
      b.y + b.h <= 0.0 || b.y >= height_) {
    throw Error(ErrorCode::InvalidBox,
                "track-file box for frame " + std::to_string(t_) +
                    " does not intersect the frame");
  }
  return b;
}

const Trajectory& Engine::step(const Frame& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw Error(ErrorCode::DimensionMismatch,
                "frame size changed mid-sequence");
  }
  ++t_;

  bool lost = false;
  box_ = advance_box(frame, lost);

  FrameFeatures feats = masked_features(frame, box_);
  const std::vector<Match> matches =
      match_descriptors(prev_features_.descs, feats.descs,
                        cfg_.match_max_distance, cfg_.match_ratio);

  Homography pair_h;  // identity when bridged
  bool bridged = true;
  int inlier_count = 0;
  if (static_cast<int>(matches.size()) >= cfg_.min_matches) {
    std::vector<Correspondence> corrs;
    corrs.reserve(matches.size());
    for (const Match& m : matches) {
      corrs.push_back(Correspondence{prev_features_.kps[m.idx_prev].pos,
                                     feats.kps[m.idx_curr].pos});
    }
    RansacConfig rc = cfg_.ransac;
    rc.seed = mix_seed(cfg_.ransac.seed, static_cast<std::uint64_t>(t_));
    try {
      RansacResult result = estimate_homography(corrs, rc);
      pair_h = result.h;
      inlier_count = result.inlier_count();
      bridged = false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConsensus &&
          e.code() != ErrorCode::AllDegenerate) {
        throw;
      }
    }
  }

  // Re-map the accumulated trajectory into this frame's coordinates. Points
  // that cross the horizon keep their last value and are flagged; they are
  // excluded from rendering, not deleted.
  if (!bridged) {
    for (std::size_t i = 0; i < traj_.points.size(); ++i) {
      if (traj_.flags[i] == PointFlag::off_horizon) continue;
      if (const auto mapped = try_apply_homography(pair_h, traj_.points[i])) {
        traj_.points[i] = *mapped;
      } else {
        traj_.flags[i] = PointFlag::off_horizon;
      }
    }
  }

  const Point2 p = footpoint(box_);
  const PointFlag flag = lost ? PointFlag::interpolated : PointFlag::measured;
  traj_.points.push_back(p);
  traj_.flags.push_back(flag);
  traj_.frame_index = t_;
  raw_points_.push_back(p);
  raw_flags_.push_back(flag);

  diags_.push_back(FrameDiagnostics{t_, pair_h,
                                    static_cast<int>(matches.size()),
                                    inlier_count, bridged, lost, box_});
  prev_features_ = std::move(feats);
  return traj_;
}

RunRecord Engine::record() const {
  RunRecord rec;
  rec.width = width_;
  rec.height = height_;
  rec.points = raw_points_;
  rec.flags = raw_flags_;
  rec.pairs.reserve(diags_.size() > 0 ? diags_.size() - 1 : 0);
  for (std::size_t i = 1; i < diags_.size(); ++i) {
    rec.pairs.push_back(RunRecord::Pair{diags_[i].pair_h,
                                        diags_[i].match_count,
                                        diags_[i].inlier_count,
                                        diags_[i].bridged});
  }
  return rec;
}

std::vector<Point2> smooth(const Trajectory& traj, int samples_per_segment) {
  std::vector<Point2> usable;
  usable.reserve(traj.points.size());
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    if (traj.flags[i] != PointFlag::off_horizon) {
      usable.push_back(traj.points[i]);
    }
  }
  return catmull_rom_polyline(usable, samples_per_segment);
}

std::vector<std::pair<Point2, double>> annotate_speed(
    const Trajectory& traj, const SpeedSeries& speeds) {
  std::vector<std::pair<Point2, double>> out;
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    if (const auto s = speeds.at(static_cast<int>(i))) {
      out.emplace_back(traj.points[i], *s);
    }
  }
  return out;
}

namespace {

struct PairFeatures {
  std::vector<Keypoint> kps;
  std::vector<Descriptor> descs;
};

PairFeatures comparison_features(const Frame& frame, const EngineConfig& cfg) {
  PairFeatures out;
  out.kps = detect(frame, cfg.max_keypoints, cfg.nms_radius);
  if (cfg.static_mask) {
    out.kps = filter_static_mask(out.kps, *cfg.static_mask, frame.width(),
                                 frame.height());
  }
  out.kps = filter_snow(out.kps, frame, cfg.snow);
  out.descs = describe(frame, out.kps);
  return out;
}

}  // namespace

std::vector<OverlayFrame> compare_runs(
    const FrameProvider& ref_frames, int ref_count,
    const FrameProvider& other_frames, int other_count,
    const RunRecord& other_record,
    std::span<const std::pair<int, int>> pairing, const EngineConfig& cfg) {
  std::vector<std::optional<int>> paired(static_cast<std::size_t>(ref_count));
  for (const auto& [ref, other] : pairing) {
    if (ref < 0 || ref >= ref_count) {
      throw Error(ErrorCode::ParseError,
                  "pairing references frame " + std::to_string(ref) +
                      " outside the reference run");
    }
    if (other < 0 || other >= other_count ||
        other >= other_record.frame_count()) {
      throw Error(ErrorCode::ParseError,
                  "pairing references frame " + std::to_string(other) +
                      " outside the other run");
    }
    paired[ref] = other;
  }

  std::vector<OverlayFrame> out(static_cast<std::size_t>(ref_count));
  for (int t = 0; t < ref_count; ++t) {
    OverlayFrame& overlay = out[t];
    overlay.ref_frame = t;
    if (!paired[t]) continue;  // stays no_pairing
    const int other_t = *paired[t];
    overlay.other_frame = other_t;
    overlay.status = OverlayStatus::no_consensus;

    const Frame ref = ref_frames(t);
    const Frame other = other_frames(other_t);
    const PairFeatures ref_feats = comparison_features(ref, cfg);
    const PairFeatures other_feats = comparison_features(other, cfg);
    const std::vector<Match> matches =
        match_descriptors(other_feats.descs, ref_feats.descs,
                          cfg.match_max_distance, cfg.match_ratio);
    overlay.match_count = static_cast<int>(matches.size());
    if (static_cast<int>(matches.size()) < cfg.min_matches) continue;

    std::vector<Correspondence> corrs;
    corrs.reserve(matches.size());
    for (const Match& m : matches) {
      corrs.push_back(Correspondence{other_feats.kps[m.idx_prev].pos,
                                     ref_feats.kps[m.idx_curr].pos});
    }
    RansacConfig rc = cfg.ransac;
    rc.seed = mix_seed(cfg.ransac.seed,
                       0x636f6d70ULL ^ static_cast<std::uint64_t>(t));
    Homography h;
    try {
      RansacResult result = estimate_homography(corrs, rc);
      h = result.h;
      overlay.inlier_count = result.inlier_count();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConsensus &&
          e.code() != ErrorCode::AllDegenerate) {
        throw;
      }
      continue;
    }

    const Trajectory other_traj = other_record.trajectory_at(other_t);
    overlay.status = OverlayStatus::ok;
    overlay.other_to_ref = h;
    overlay.points.reserve(other_traj.points.size());
    overlay.flags.reserve(other_traj.points.size());
    for (std::size_t i = 0; i < other_traj.points.size(); ++i) {
      Point2 p = other_traj.points[i];
      PointFlag flag = other_traj.flags[i];
      if (flag != PointFlag::off_horizon) {
        if (const auto mapped = try_apply_homography(h, p)) {
          p = *mapped;
        } else {
          flag = PointFlag::off_horizon;
        }
      }
      overlay.points.push_back(p);
      overlay.flags.push_back(flag);
    }
  }
  return out;
}

}  // namespace piste
