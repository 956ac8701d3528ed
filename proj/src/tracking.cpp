// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace piste {

double iou(const BBox& a, const BBox& b) {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x + a.w, b.x + b.w);
  const double y1 = std::min(a.y + a.h, b.y + b.h);
  const double inter = std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0);
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

TemplateTracker::TemplateTracker(const Frame& frame0, const BBox& b0,
                                 TrackerConfig cfg)
    : cfg_(cfg), frame_width_(frame0.width()), frame_height_(frame0.height()) {
  if (!(b0.w >= 8.0 && b0.h >= 8.0)) {
    throw Error(ErrorCode::InvalidBox, "initial box must be at least 8x8 px");
  }
  if (b0.x < 0.0 || b0.y < 0.0 || b0.x + b0.w > frame0.width() ||
      b0.y + b0.h > frame0.height()) {
    throw Error(ErrorCode::InvalidBox,
                "initial box must lie fully inside the frame");
  }
  tw_ = static_cast<int>(std::lround(b0.w));
  th_ = static_cast<int>(std::lround(b0.h));
  const int x0 = std::clamp(static_cast<int>(std::lround(b0.x)), 0,
                            frame_width_ - tw_);
  const int y0 = std::clamp(static_cast<int>(std::lround(b0.y)), 0,
                            frame_height_ - th_);
  template_.resize(static_cast<std::size_t>(tw_) * th_);
  for (int y = 0; y < th_; ++y) {
    for (int x = 0; x < tw_; ++x) {
      template_[static_cast<std::size_t>(y) * tw_ + x] =
          static_cast<float>(frame0.luma(x0 + x, y0 + y));
    }
  }
  box_ = BBox{static_cast<double>(x0), static_cast<double>(y0),
              static_cast<double>(tw_), static_cast<double>(th_)};
}

BBox TemplateTracker::track(const Frame& frame) {
  if (frame.width() != frame_width_ || frame.height() != frame_height_) {
    throw Error(ErrorCode::DimensionMismatch,
                "tracked frame size differs from the initial frame");
  }

  // Template statistics.
  double t_mean = 0.0;
  for (float v : template_) t_mean += v;
  t_mean /= static_cast<double>(template_.size());
  double t_var = 0.0;
  for (float v : template_) {
    const double d = v - t_mean;
    t_var += d * d;
  }

  // Search window: previous box scaled about its center.
  const double cx = box_.x + box_.w / 2.0;
  const double cy = box_.y + box_.h / 2.0;
  const double half_w = cfg_.window_scale * box_.w / 2.0;
  const double half_h = cfg_.window_scale * box_.h / 2.0;
  const int wx0 = std::max(0, static_cast<int>(std::floor(cx - half_w)));
  const int wy0 = std::max(0, static_cast<int>(std::floor(cy - half_h)));
  const int wx1 = std::min(frame_width_, static_cast<int>(std::ceil(cx + half_w)));
  const int wy1 = std::min(frame_height_, static_cast<int>(std::ceil(cy + half_h)));

  double best = -2.0;
  int best_x = -1, best_y = -1;
  const auto& g = frame.gray();
  for (int y = wy0; y + th_ <= wy1; ++y) {
    for (int x = wx0; x + tw_ <= wx1; ++x) {
      double c_sum = 0.0, c_sq = 0.0, cross = 0.0;
      for (int ty = 0; ty < th_; ++ty) {
        const std::uint8_t* row =
            g.data() + static_cast<std::size_t>(y + ty) * frame_width_ + x;
        const float* trow = template_.data() + static_cast<std::size_t>(ty) * tw_;
        for (int tx = 0; tx < tw_; ++tx) {
          const double c = row[tx];
          c_sum += c;
          c_sq += c * c;
          cross += c * (trow[tx] - t_mean);
        }
      }
      const double npix = static_cast<double>(template_.size());
      const double c_var = c_sq - c_sum * c_sum / npix;
      const double denom = std::sqrt(t_var * c_var);
      // cross already has the template mean removed; removing the candidate
      // mean contributes nothing because sum(T - t_mean) = 0.
      const double score = denom > 1e-12 ? cross / denom : -1.0;
      if (score > best) {
        best = score;
        best_x = x;
        best_y = y;
      }
    }
  }

  if (best_x < 0 || best < cfg_.lost_threshold) {
    throw Error(ErrorCode::LostTarget,
                "best correlation " + std::to_string(best) +
                    " below threshold");
  }

  for (int ty = 0; ty < th_; ++ty) {
    for (int tx = 0; tx < tw_; ++tx) {
      const std::size_t i = static_cast<std::size_t>(ty) * tw_ + tx;
      const float crop = frame.luma(best_x + tx, best_y + ty);
      template_[i] = static_cast<float>((1.0 - cfg_.template_alpha) * template_[i] +
                                        cfg_.template_alpha * crop);
    }
  }
  box_ = BBox{static_cast<double>(best_x), static_cast<double>(best_y),
              static_cast<double>(tw_), static_cast<double>(th_)};
  return box_;
}

namespace {

// Splits a CSV row, trimming blanks; reports 1-based line/column on errors.
std::vector<double> parse_numbers(const std::string& line, int line_no,
                                  std::size_t expected) {
  std::vector<double> out;
  std::size_t start = 0;
  int column = 1;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = field.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      throw Error(ErrorCode::ParseError,
                  "empty field at line " + std::to_string(line_no) +
                      ", column " + std::to_string(column));
    }
    const auto e = field.find_last_not_of(" \t\r");
    field = field.substr(b, e - b + 1);
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
    out.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
    ++column;
  }
  if (out.size() != expected) {
    throw Error(ErrorCode::ParseError,
                "expected " + std::to_string(expected) + " fields at line " +
                    std::to_string(line_no) + ", got " +
                    std::to_string(out.size()));
  }
  return out;
}

}  // namespace

TrackTable load_track_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  TrackTable table;
  std::string line;
  int line_no = 0;
  int prev_frame = -1;
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
      if (compact == "frame,x,y,w,h") continue;  // optional header
    }
    const std::vector<double> v = parse_numbers(line, line_no, 5);
    if (v[0] < 0.0 || v[0] != std::floor(v[0])) {
      throw Error(ErrorCode::ParseError,
                  "frame index must be a non-negative integer at line " +
                      std::to_string(line_no));
    }
    const int frame = static_cast<int>(v[0]);
    if (frame <= prev_frame) {
      throw Error(ErrorCode::NonMonotonicFrames,
                  "frame " + std::to_string(frame) + " at line " +
                      std::to_string(line_no) + " does not increase");
    }
    prev_frame = frame;
    table.boxes[frame] = BBox{v[1], v[2], v[3], v[4]};
  }
  return table;
}

}  // namespace piste
