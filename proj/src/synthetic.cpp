// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "piste/random.hpp"

namespace piste {

namespace {

double hash_unit(std::uint64_t seed, std::int64_t x, std::int64_t y) {
  const std::uint64_t h = splitmix64(
      seed ^ (static_cast<std::uint64_t>(x) * 0x632be59bd9b4e019ULL) ^
      (static_cast<std::uint64_t>(y) * 0x9e3779b97f4a7c15ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
}

double hash_signed(std::uint64_t seed, std::int64_t x, std::int64_t y) {
  return 2.0 * hash_unit(seed, x, y) - 1.0;  // [-1, 1)
}

// Bilinearly interpolated lattice noise, one octave.
double lattice_noise(std::uint64_t seed, double x, double y, int cell) {
  const double fx = x / cell;
  const double fy = y / cell;
  const std::int64_t ix = static_cast<std::int64_t>(std::floor(fx));
  const std::int64_t iy = static_cast<std::int64_t>(std::floor(fy));
  const double tx = fx - static_cast<double>(ix);
  const double ty = fy - static_cast<double>(iy);
  const double v00 = hash_signed(seed, ix, iy);
  const double v10 = hash_signed(seed, ix + 1, iy);
  const double v01 = hash_signed(seed, ix, iy + 1);
  const double v11 = hash_signed(seed, ix + 1, iy + 1);
  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

// Whitish cover repeats with this period so any viewport sees roughly the
// configured fraction.
constexpr double kLanePeriod = 256.0;

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kMarkerPalette[] = {
    {18, 28, 92},  {16, 16, 16},   {196, 32, 28}, {234, 122, 24},
    {12, 92, 36},  {36, 64, 198},  {150, 24, 130}, {220, 200, 40},
};

void fill_rect(std::vector<std::uint8_t>& rgb, int width, int height, int x0,
               int y0, int w, int h, Rgb c) {
  const int x1 = std::min(width, x0 + w);
  const int y1 = std::min(height, y0 + h);
  for (int y = std::max(0, y0); y < y1; ++y) {
    for (int x = std::max(0, x0); x < x1; ++x) {
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
      rgb[i] = c.r;
      rgb[i + 1] = c.g;
      rgb[i + 2] = c.b;
    }
  }
}

Eigen::Matrix3d translation_m(double tx, double ty) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 2) = tx;
  m(1, 2) = ty;
  return m;
}

// Per-frame viewport transform in pixel space, anchored at the frame
// center; the ground-truth pair homography is its inverse.
Eigen::Matrix3d camera_step(const CameraMotion& mo, double qx, double qy) {
  Eigen::Matrix3d m = translation_m(mo.pan_x, mo.pan_y);
  if (mo.rotate != 0.0) {
    m = m * rotation_about(mo.rotate, Point2{qx, qy}).m;
  }
  if (mo.zoom != 1.0) {
    m = m * scale_about(mo.zoom, Point2{qx, qy}).m;
  }
  if (mo.tilt_x != 0.0 || mo.tilt_y != 0.0) {
    m = m * (translation_m(qx, qy) * projective_tilt(mo.tilt_x, mo.tilt_y).m *
             translation_m(-qx, -qy));
  }
  return m;
}

// Athlete blob: hard-edged ellipse filling the box, striped suit over dark
// boots. Evaluated in box-local coordinates so it moves rigidly.
bool blob_color(double u, double v, Rgb& out) {
  const double du = (u - 0.5) / 0.5;
  const double dv = (v - 0.5) / 0.5;
  if (du * du + dv * dv > 1.0) return false;
  if (v > 0.88) {
    out = {24, 20, 20};  // boots
  } else if (v < 0.18) {
    out = {204, 36, 40};  // helmet
  } else {
    const int stripe = static_cast<int>(std::floor(u * 5.0));
    out = (stripe % 2 == 0) ? Rgb{32, 40, 150} : Rgb{214, 206, 60};
  }
  return true;
}

}  // namespace

bool SceneRenderer::whitish_at(double world_y) const {
  if (cfg_.whitish_fraction <= 0.0) return false;
  const double phase =
      world_y - kLanePeriod * std::floor(world_y / kLanePeriod);
  return phase < kLanePeriod * cfg_.whitish_fraction;
}

SceneRenderer::SceneRenderer(const SceneConfig& cfg) : cfg_(cfg) {
  if (cfg_.frames < 1) {
    throw Error(ErrorCode::ConfigError, "frames must be >= 1");
  }
  if (cfg_.frame_width < 16 || cfg_.frame_height < 16) {
    throw Error(ErrorCode::ConfigError, "frame size must be at least 16x16");
  }
  if (cfg_.world_width < cfg_.frame_width ||
      cfg_.world_height < cfg_.frame_height) {
    throw Error(ErrorCode::ConfigError,
                "world canvas must be at least as large as the frame");
  }
  if (!(cfg_.motion.zoom > 0.0)) {
    throw Error(ErrorCode::ConfigError,
                "zoom step 0 makes the camera path singular");
  }
  if (cfg_.whitish_fraction < 0.0 || cfg_.whitish_fraction > 0.7) {
    throw Error(ErrorCode::ConfigError, "whitish_fraction must be in [0, 0.7]");
  }
  if (cfg_.athlete_box_w < 8.0 || cfg_.athlete_box_h < 8.0) {
    throw Error(ErrorCode::ConfigError, "athlete box must be at least 8x8 px");
  }
  if (!(cfg_.view_scale > 0.0)) {
    throw Error(ErrorCode::ConfigError, "view_scale must be positive");
  }

  const int ww = cfg_.world_width;
  const int wh = cfg_.world_height;

  // --- world canvas: two-octave value noise around mid-gray, whitish lanes ---
  world_.resize(static_cast<std::size_t>(ww) * wh * 3);
  const std::uint64_t noise_seed = mix_seed(cfg_.seed, 0x6e6f6973ULL);
  for (int y = 0; y < wh; ++y) {
    const bool in_lane = whitish_at(y);
    for (int x = 0; x < ww; ++x) {
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * ww + x);
      if (in_lane) {
        world_[i] = 236;
        world_[i + 1] = 239;
        world_[i + 2] = 242;
        continue;
      }
      const double n = cfg_.noise_amplitude *
                           lattice_noise(noise_seed, x, y, 32) +
                       0.5 * cfg_.noise_amplitude *
                           lattice_noise(noise_seed ^ 0xa5a5ULL, x, y, 8);
      const std::uint8_t v = clamp_byte(128.0 + n);
      world_[i] = v;
      world_[i + 1] = v;
      world_[i + 2] = clamp_byte(128.0 + 0.9 * n);
    }
  }

  // --- markers, kept clear of the whitish lanes ---
  Rng rng(mix_seed(cfg_.seed, 0x6d61726bULL));
  const int margin = 24;
  const bool lanes = cfg_.whitish_fraction > 0.0;
  auto marker_row_ok = [&](int y0, int h) {
    if (!lanes) return true;
    // the whole marker plus a pad must sit inside one textured lane
    const double top = y0 - 4.0;
    const double bottom = y0 + h + 4.0;
    if (whitish_at(top) || whitish_at(bottom)) return false;
    return std::floor(top / kLanePeriod) == std::floor(bottom / kLanePeriod);
  };
  const int size_cap = lanes ? 22 : 42;  // textured lanes are narrow
  int attempts = 0;
  for (int placed = 0; placed < cfg_.marker_count;) {
    if (++attempts > 400 * std::max(1, cfg_.marker_count)) {
      throw Error(ErrorCode::ConfigError,
                  "cannot place markers outside the whitish lanes");
    }
    const int kind = static_cast<int>(rng.uniform_u32(3));
    const Rgb color = kMarkerPalette[rng.uniform_u32(8)];
    const int mw = 18 + static_cast<int>(rng.uniform_u32(42));
    const int mh = 18 + static_cast<int>(rng.uniform_u32(size_cap));
    const int x0 = margin + static_cast<int>(rng.uniform_u32(
                                std::max(1, ww - 2 * margin - mw)));
    const int y0 = margin + static_cast<int>(rng.uniform_u32(
                                std::max(1, wh - 2 * margin - mh)));
    if (!marker_row_ok(y0, mh)) continue;  // redraw position
    switch (kind) {
      case 0:  // filled rectangle
        fill_rect(world_, ww, wh, x0, y0, mw, mh, color);
        break;
      case 1:  // cross: two perpendicular bars
        fill_rect(world_, ww, wh, x0, y0 + mh / 2 - 3, mw, 6, color);
        fill_rect(world_, ww, wh, x0 + mw / 2 - 3, y0, 6, mh, color);
        break;
      default:  // gate-like pole pair
        fill_rect(world_, ww, wh, x0, y0, 5, mh, color);
        fill_rect(world_, ww, wh, x0 + mw - 5, y0, 5, mh, color);
        break;
    }
    ++placed;
  }

  // --- camera path and ground truth ---
  const double qx = cfg_.frame_width / 2.0;
  const double qy = cfg_.frame_height / 2.0;
  const Point2 center = cfg_.view_center
                            ? *cfg_.view_center
                            : Point2{ww / 2.0, wh / 2.0};
  Eigen::Matrix3d pix2world =
      translation_m(center.x, center.y) *
      scale_about(cfg_.view_scale, Point2{0.0, 0.0}).m *
      translation_m(-qx, -qy);
  const Eigen::Matrix3d step = camera_step(cfg_.motion, qx, qy);

  pix2world_.reserve(cfg_.frames);
  world2pix_.reserve(cfg_.frames);
  for (int t = 0; t < cfg_.frames; ++t) {
    if (t > 0) pix2world = pix2world * step;
    if (std::abs(pix2world.determinant()) < 1e-12) {
      throw Error(ErrorCode::ConfigError,
                  "camera path becomes singular at frame " + std::to_string(t));
    }
    pix2world_.push_back(pix2world);
    world2pix_.push_back(pix2world.inverse());
  }

  Homography step_h;
  step_h.m = step;
  const Homography pair = canonical(invert(step_h));
  truth_.pair_h.assign(static_cast<std::size_t>(cfg_.frames - 1), pair);

  for (int t = 0; t < cfg_.frames; ++t) {
    // Viewport must stay inside the canvas so rendered content is genuine.
    const Point2 corners[4] = {{0.0, 0.0},
                               {static_cast<double>(cfg_.frame_width), 0.0},
                               {0.0, static_cast<double>(cfg_.frame_height)},
                               {static_cast<double>(cfg_.frame_width),
                                static_cast<double>(cfg_.frame_height)}};
    for (const Point2& c : corners) {
      const Eigen::Vector3d w = pix2world_[t] * Eigen::Vector3d(c.x, c.y, 1.0);
      if (std::abs(w(2)) < 1e-9) {
        throw Error(ErrorCode::ConfigError,
                    "camera path crosses the horizon at frame " +
                        std::to_string(t));
      }
      const double wx = w(0) / w(2);
      const double wy = w(1) / w(2);
      if (wx < 0.0 || wy < 0.0 || wx > ww - 1.0 || wy > wh - 1.0) {
        throw Error(ErrorCode::ConfigError,
                    "camera viewport leaves the world canvas at frame " +
                        std::to_string(t));
      }
    }

    const Point2 foot_world{cfg_.athlete_start.x + t * cfg_.athlete_velocity.x,
                            cfg_.athlete_start.y + t * cfg_.athlete_velocity.y};
    const Eigen::Vector3d f =
        world2pix_[t] * Eigen::Vector3d(foot_world.x, foot_world.y, 1.0);
    if (std::abs(f(2)) < 1e-9) {
      throw Error(ErrorCode::ConfigError,
                  "athlete crosses the horizon at frame " + std::to_string(t));
    }
    const double fx = f(0) / f(2);
    const double fy = f(1) / f(2);
    const BBox box{fx - cfg_.athlete_box_w / 2.0, fy - cfg_.athlete_box_h,
                   cfg_.athlete_box_w, cfg_.athlete_box_h};
    if (box.x < 0.0 || box.y < 0.0 || box.x + box.w > cfg_.frame_width ||
        box.y + box.h > cfg_.frame_height) {
      throw Error(ErrorCode::ConfigError,
                  "athlete not fully visible at frame " + std::to_string(t));
    }
    truth_.boxes.push_back(box);
    truth_.footpoints.push_back(footpoint(box));
  }
}

Frame SceneRenderer::render(int t) const {
  if (t < 0 || t >= cfg_.frames) {
    throw Error(ErrorCode::ConfigError,
                "frame index " + std::to_string(t) + " out of range");
  }
  const int fw = cfg_.frame_width;
  const int fh = cfg_.frame_height;
  const int ww = cfg_.world_width;
  const int wh = cfg_.world_height;
  const Eigen::Matrix3d& w_of_pix = pix2world_[t];
  const std::uint64_t speckle_seed = mix_seed(cfg_.seed, 0x7370656bULL);

  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(fw) * fh * 3);
  for (int y = 0; y < fh; ++y) {
    for (int x = 0; x < fw; ++x) {
      const Eigen::Vector3d w = w_of_pix * Eigen::Vector3d(x, y, 1.0);
      const double wx = std::clamp(w(0) / w(2), 0.0, ww - 1.000001);
      const double wy = std::clamp(w(1) / w(2), 0.0, wh - 1.000001);
      const int x0 = static_cast<int>(wx);
      const int y0 = static_cast<int>(wy);
      const double tx = wx - x0;
      const double ty = wy - y0;
      const std::size_t i00 = 3 * (static_cast<std::size_t>(y0) * ww + x0);
      const std::size_t i10 = i00 + 3;
      const std::size_t i01 = i00 + 3 * static_cast<std::size_t>(ww);
      const std::size_t i11 = i01 + 3;
      const std::size_t out = 3 * (static_cast<std::size_t>(y) * fw + x);
      for (int c = 0; c < 3; ++c) {
        const double a = world_[i00 + c] + (world_[i10 + c] - world_[i00 + c]) * tx;
        const double b = world_[i01 + c] + (world_[i11 + c] - world_[i01 + c]) * tx;
        rgb[out + c] = clamp_byte(a + (b - a) * ty + 0.5);
      }
      // Camera-attached sparkle: fixed in frame coordinates, applied only
      // where whitish cover shows through.
      if (cfg_.speckle_amplitude > 0.0 && whitish_at(wy)) {
        const double s =
            cfg_.speckle_amplitude * hash_signed(speckle_seed, x, y);
        for (int c = 0; c < 3; ++c) {
          rgb[out + c] = clamp_byte(rgb[out + c] + s);
        }
      }
    }
  }

  // Athlete blob, drawn last so it occludes the background.
  const BBox& box = truth_.boxes[t];
  const int bx0 = std::max(0, static_cast<int>(std::floor(box.x)));
  const int by0 = std::max(0, static_cast<int>(std::floor(box.y)));
  const int bx1 = std::min(fw, static_cast<int>(std::ceil(box.x + box.w)));
  const int by1 = std::min(fh, static_cast<int>(std::ceil(box.y + box.h)));
  for (int y = by0; y < by1; ++y) {
    for (int x = bx0; x < bx1; ++x) {
      const double u = (x - box.x) / box.w;
      const double v = (y - box.y) / box.h;
      if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) continue;
      Rgb c;
      if (!blob_color(u, v, c)) continue;
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * fw + x);
      rgb[i] = c.r;
      rgb[i + 1] = c.g;
      rgb[i + 2] = c.b;
    }
  }

  return Frame(fw, fh, std::move(rgb));
}

SyntheticSequence generate_scene(const SceneConfig& cfg) {
  SceneRenderer renderer(cfg);
  SyntheticSequence seq;
  seq.truth = renderer.truth();
  seq.frames.reserve(renderer.frame_count());
  for (int t = 0; t < renderer.frame_count(); ++t) {
    seq.frames.push_back(renderer.render(t));
  }
  return seq;
}

ErrorReport measure_error(const Trajectory& reconstructed,
                          const GroundTruth& truth) {
  const int n = static_cast<int>(truth.footpoints.size());
  if (static_cast<int>(reconstructed.points.size()) != n) {
    throw Error(ErrorCode::LengthMismatch,
                "trajectory has " + std::to_string(reconstructed.points.size()) +
                    " points, ground truth has " + std::to_string(n));
  }
  ErrorReport report;
  report.per_frame.reserve(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    Point2 g = truth.footpoints[i];
    for (int j = i; j < n - 1; ++j) {
      g = apply_homography(truth.pair_h[j], g);
    }
    const double err = distance(reconstructed.points[i], g);
    report.per_frame.push_back(err);
    sum += err;
    report.max_px = std::max(report.max_px, err);
  }
  report.mean_px = n > 0 ? sum / n : 0.0;
  return report;
}

namespace {

std::vector<double> parse_pair(const std::string& value, int line_no) {
  std::string s = value;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(s);
  double a = 0.0, b = 0.0;
  if (!(in >> a >> b)) {
    throw Error(ErrorCode::ParseError,
                "expected two numbers at line " + std::to_string(line_no));
  }
  std::string rest;
  if (in >> rest) {
    throw Error(ErrorCode::ParseError,
                "trailing content at line " + std::to_string(line_no));
  }
  return {a, b};
}

double parse_number(const std::string& value, int line_no) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != value.size()) {
    throw Error(ErrorCode::ParseError,
                "bad number '" + value + "' at line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

SceneConfig load_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  SceneConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError,
                  "expected key = value at line " + std::to_string(line_no));
    }
    auto trim = [](std::string s) {
      const auto f = s.find_first_not_of(" \t");
      if (f == std::string::npos) return std::string();
      const auto l = s.find_last_not_of(" \t");
      return s.substr(f, l - f + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::ParseError,
                  "empty key or value at line " + std::to_string(line_no));
    }

    if (key == "frames") {
      cfg.frames = static_cast<int>(parse_number(value, line_no));
    } else if (key == "frame_width") {
      cfg.frame_width = static_cast<int>(parse_number(value, line_no));
    } else if (key == "frame_height") {
      cfg.frame_height = static_cast<int>(parse_number(value, line_no));
    } else if (key == "world_width") {
      cfg.world_width = static_cast<int>(parse_number(value, line_no));
    } else if (key == "world_height") {
      cfg.world_height = static_cast<int>(parse_number(value, line_no));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_number(value, line_no));
    } else if (key == "markers") {
      cfg.marker_count = static_cast<int>(parse_number(value, line_no));
    } else if (key == "noise_amplitude") {
      cfg.noise_amplitude = parse_number(value, line_no);
    } else if (key == "whitish_fraction") {
      cfg.whitish_fraction = parse_number(value, line_no);
    } else if (key == "speckle_amplitude") {
      cfg.speckle_amplitude = parse_number(value, line_no);
    } else if (key == "athlete_start") {
      const auto p = parse_pair(value, line_no);
      cfg.athlete_start = Point2{p[0], p[1]};
    } else if (key == "athlete_velocity") {
      const auto p = parse_pair(value, line_no);
      cfg.athlete_velocity = Point2{p[0], p[1]};
    } else if (key == "athlete_box") {
      const auto p = parse_pair(value, line_no);
      cfg.athlete_box_w = p[0];
      cfg.athlete_box_h = p[1];
    } else if (key == "view_center") {
      const auto p = parse_pair(value, line_no);
      cfg.view_center = Point2{p[0], p[1]};
    } else if (key == "view_scale") {
      cfg.view_scale = parse_number(value, line_no);
    } else if (key == "pan") {
      const auto p = parse_pair(value, line_no);
      cfg.motion.pan_x = p[0];
      cfg.motion.pan_y = p[1];
    } else if (key == "zoom") {
      cfg.motion.zoom = parse_number(value, line_no);
    } else if (key == "rotate") {
      cfg.motion.rotate = parse_number(value, line_no);
    } else if (key == "tilt") {
      const auto p = parse_pair(value, line_no);
      cfg.motion.tilt_x = p[0];
      cfg.motion.tilt_y = p[1];
    } else {
      throw Error(ErrorCode::ParseError,
                  "unknown key '" + key + "' at line " + std::to_string(line_no));
    }
  }
  return cfg;
}

}  // namespace piste
