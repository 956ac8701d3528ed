// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0
//
// pistetraj: reconstruct an athlete's 2D trajectory from a moving-camera
// PNG frame sequence, render it back into each frame's perspective, and
// evaluate against synthetic ground truth.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "piste/image_io.hpp"
#include "piste/reconstruction.hpp"
#include "piste/render.hpp"
#include "piste/synthetic.hpp"
#include "piste/trajectory_io.hpp"

namespace fs = std::filesystem;

namespace {

struct PipelineFlags {
  std::string mask_path;
  std::string snow = "on";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mask", mask_path,
                    "single-channel PNG; nonzero pixels are excluded");
    cmd->add_option("--snow-filter", snow, "whitish-keypoint filter")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--seed", seed, "pipeline seed (default 0)");
  }

  piste::EngineConfig engine_config() const {
    piste::EngineConfig cfg;
    cfg.snow.enabled = snow == "on";
    cfg.ransac.seed = seed;
    if (!mask_path.empty()) {
      cfg.static_mask = piste::load_mask_png(mask_path);
    }
    return cfg;
  }
};

piste::BBox parse_bbox(const std::string& text) {
  double v[4];
  char extra;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &v[0], &v[1], &v[2],
                  &v[3], &extra) != 4) {
    throw piste::Error(piste::ErrorCode::ConfigError,
                       "--init-bbox expects X,Y,W,H");
  }
  return piste::BBox{v[0], v[1], v[2], v[3]};
}

std::string frame_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d.png", index);
  return buf;
}

int run_reconstruct(const std::string& frames_dir, const std::string& init_bbox,
                    const std::string& track_file, const PipelineFlags& flags,
                    const std::string& out_dir, const std::string& export_path,
                    const std::string& speed_path, int spline_samples) {
  const piste::FrameSequence seq = piste::load_sequence(frames_dir);
  piste::EngineConfig cfg = flags.engine_config();

  piste::SpeedSeries speeds;
  if (!speed_path.empty()) {
    speeds = piste::load_speed_csv(speed_path);
  }

  std::optional<piste::Engine> engine;
  const piste::Frame frame0 = seq.load(0);
  if (!track_file.empty()) {
    engine.emplace(frame0, piste::load_track_file(track_file), cfg);
  } else {
    engine.emplace(frame0, parse_bbox(init_bbox), cfg);
  }

  piste::OverlayStyle style;
  const bool render = !out_dir.empty();
  if (render) {
    fs::create_directories(out_dir);
  }
  auto render_frame = [&](const piste::Frame& frame, int t) {
    if (!render) return;
    const std::vector<piste::Point2> curve =
        piste::smooth(engine->trajectory(), spline_samples);
    std::vector<piste::SpeedAnnotation> labels;
    if (!speeds.speed_mps.empty()) {
      for (const auto& [pos, mps] :
           piste::annotate_speed(engine->trajectory(), speeds)) {
        labels.push_back(piste::SpeedAnnotation{pos, mps});
      }
    }
    const piste::Frame overlaid =
        piste::render_overlay(frame, curve, style, labels);
    piste::save_png_rgb(overlaid, fs::path(out_dir) / frame_name(t));
  };

  render_frame(frame0, 0);
  for (int t = 1; t < seq.size(); ++t) {
    const piste::Frame frame = seq.load(t);
    engine->step(frame);
    render_frame(frame, t);
  }

  if (!export_path.empty()) {
    piste::export_run(engine->record(), export_path);
  }

  int bridged = 0, lost = 0;
  for (const auto& d : engine->diagnostics()) {
    bridged += d.bridged && d.frame > 0;
    lost += d.tracker_lost;
  }
  std::printf("frames=%d bridged=%d lost=%d\n", seq.size(), bridged, lost);
  return 0;
}

int run_synth(const std::string& scene_path, const std::string& out_dir) {
  const piste::SceneConfig cfg = piste::load_scene_config(scene_path);
  const piste::SceneRenderer renderer(cfg);
  const fs::path out(out_dir);
  fs::create_directories(out / "frames");
  for (int t = 0; t < renderer.frame_count(); ++t) {
    piste::save_png_rgb(renderer.render(t), out / "frames" / frame_name(t));
  }
  piste::save_ground_truth(renderer.truth(), out / "truth.json");
  piste::write_track_csv(renderer.truth().boxes, out / "track.csv");
  std::printf("frames=%d size=%dx%d out=%s\n", renderer.frame_count(),
              renderer.width(), renderer.height(), out_dir.c_str());
  return 0;
}

int run_evaluate(const std::string& export_path, const std::string& truth_path) {
  const piste::RunRecord rec = piste::import_run(export_path);
  const piste::GroundTruth truth = piste::load_ground_truth(truth_path);
  const piste::Trajectory traj = rec.trajectory_at(rec.frame_count() - 1);
  const piste::ErrorReport report = piste::measure_error(traj, truth);
  std::printf("frames=%d mean_px=%.6f max_px=%.6f\n", rec.frame_count(),
              report.mean_px, report.max_px);
  return 0;
}

int run_compare(const std::string& frames_dir, const std::string& export_path,
                const std::string& other_frames_dir,
                const std::string& other_export, const std::string& pairing_path,
                const PipelineFlags& flags, const std::string& out_dir,
                int spline_samples) {
  const piste::FrameSequence ref_seq = piste::load_sequence(frames_dir);
  const piste::FrameSequence other_seq = piste::load_sequence(other_frames_dir);
  const piste::RunRecord ref_rec = piste::import_run(export_path);
  const piste::RunRecord other_rec = piste::import_run(other_export);
  if (ref_rec.frame_count() != ref_seq.size() ||
      other_rec.frame_count() != other_seq.size()) {
    throw piste::Error(piste::ErrorCode::LengthMismatch,
                       "export frame counts do not match the frame directories");
  }
  const auto pairing = piste::load_pairing_csv(pairing_path);
  const piste::EngineConfig cfg = flags.engine_config();

  const auto overlays = piste::compare_runs(
      [&](int t) { return ref_seq.load(t); }, ref_seq.size(),
      [&](int t) { return other_seq.load(t); }, other_seq.size(), other_rec,
      pairing, cfg);

  const fs::path out(out_dir);
  fs::create_directories(out / "frames");
  piste::OverlayStyle style;
  int ok = 0, skipped = 0;
  for (int t = 0; t < ref_seq.size(); ++t) {
    const piste::Frame base = ref_seq.load(t);
    const piste::Trajectory ref_traj = ref_rec.trajectory_at(t);
    piste::Frame composed = piste::render_overlay(
        base, piste::smooth(ref_traj, spline_samples), style);
    const piste::OverlayFrame& o = overlays[t];
    if (o.status == piste::OverlayStatus::ok) {
      piste::Trajectory other_traj;
      other_traj.points = o.points;
      other_traj.flags = o.flags;
      other_traj.frame_index = t;
      composed = piste::render_polyline(
          composed, piste::smooth(other_traj, spline_samples),
          style.comparison_color, style.line_width, style.point_radius);
      ++ok;
    } else if (o.status == piste::OverlayStatus::no_consensus) {
      ++skipped;
    }
    piste::save_png_rgb(composed, out / "frames" / frame_name(t));
  }
  piste::export_overlays(overlays, out / "overlay.json");
  std::printf("frames=%d overlays=%d no_consensus=%d\n", ref_seq.size(), ok,
              skipped);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pistetraj - athlete trajectory reconstruction from moving-camera "
      "frame sequences"};
  app.require_subcommand(1);

  // reconstruct
  auto* rec = app.add_subcommand(
      "reconstruct", "run the online reconstruction over a frame directory");
  std::string rec_frames, rec_bbox, rec_track, rec_out, rec_export, rec_speed;
  int rec_spline = 8;
  PipelineFlags rec_flags;
  rec->add_option("--frames", rec_frames, "directory of PNG frames")
      ->required();
  rec->add_option("--init-bbox", rec_bbox, "initial athlete box X,Y,W,H");
  rec->add_option("--track-file", rec_track, "external track CSV");
  rec_flags.attach(rec);
  rec->add_option("--out", rec_out, "directory for rendered overlay frames");
  rec->add_option("--export", rec_export, "trajectory export path (JSON lines)");
  rec->add_option("--speed", rec_speed, "speed CSV for annotations");
  rec->add_option("--spline-samples", rec_spline,
                  "interpolated points per segment when rendering");

  // compare
  auto* cmp = app.add_subcommand(
      "compare", "overlay another run's trajectory onto this one");
  std::string cmp_frames, cmp_export, cmp_other_frames, cmp_other_export,
      cmp_pairing, cmp_out;
  int cmp_spline = 8;
  PipelineFlags cmp_flags;
  cmp->add_option("--frames", cmp_frames, "reference frame directory")
      ->required();
  cmp->add_option("--export", cmp_export, "reference run export (input)")
      ->required();
  cmp->add_option("--other-frames", cmp_other_frames, "other frame directory")
      ->required();
  cmp->add_option("--other-export", cmp_other_export, "other run export")
      ->required();
  cmp->add_option("--pairing", cmp_pairing, "ref_frame,other_frame CSV")
      ->required();
  cmp_flags.attach(cmp);
  cmp->add_option("--out", cmp_out, "output directory")->required();
  cmp->add_option("--spline-samples", cmp_spline,
                  "interpolated points per segment when rendering");

  // synth
  auto* syn = app.add_subcommand(
      "synth", "generate a synthetic sequence with exact ground truth");
  std::string syn_scene, syn_out;
  syn->add_option("--scene", syn_scene, "scene config file")->required();
  syn->add_option("--out", syn_out, "output directory")->required();

  // evaluate
  auto* eva = app.add_subcommand(
      "evaluate", "compare a trajectory export against ground truth");
  std::string eva_export, eva_truth;
  eva->add_option("--export", eva_export, "trajectory export")->required();
  eva->add_option("--truth", eva_truth, "ground-truth document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (rec->parsed()) {
      if (rec_bbox.empty() == rec_track.empty()) {
        std::fprintf(stderr,
                     "error: UsageError: provide exactly one of --init-bbox "
                     "or --track-file\n");
        return 2;
      }
      return run_reconstruct(rec_frames, rec_bbox, rec_track, rec_flags,
                             rec_out, rec_export, rec_speed, rec_spline);
    }
    if (cmp->parsed()) {
      return run_compare(cmp_frames, cmp_export, cmp_other_frames,
                         cmp_other_export, cmp_pairing, cmp_flags, cmp_out,
                         cmp_spline);
    }
    if (syn->parsed()) {
      return run_synth(syn_scene, syn_out);
    }
    if (eva->parsed()) {
      return run_evaluate(eva_export, eva_truth);
    }
  } catch (const piste::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return piste::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: Internal: %s\n", e.what());
    return 70;
  }
  return 0;
}
