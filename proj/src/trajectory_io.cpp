// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/trajectory_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace piste {

namespace {

using nlohmann::json;

json homography_to_json(const Homography& h) {
  json arr = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      arr.push_back(h.m(r, c));
    }
  }
  return arr;
}

Homography homography_from_json(const json& arr) {
  if (!arr.is_array() || arr.size() != 9) {
    throw Error(ErrorCode::ParseError, "homography must be 9 numbers");
  }
  Homography h;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      h.m(r, c) = arr[3 * r + c].get<double>();
    }
  }
  return h;
}

json parse_line(const std::string& line, int line_no) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": " + e.what());
  }
}

std::vector<json> read_document(const std::filesystem::path& path,
                                const std::string& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::vector<json> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    records.push_back(parse_line(line, line_no));
  }
  if (records.empty() || !records.front().contains("schema") ||
      records.front()["schema"] != schema) {
    throw Error(ErrorCode::ParseError,
                path.string() + " is not a " + schema + " document");
  }
  return records;
}

void write_file(const std::string& content, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path.string());
  }
}

}  // namespace

std::string export_run_string(const RunRecord& record) {
  std::ostringstream out;
  json header;
  header["schema"] = "piste-traj/1";
  header["frames"] = record.frame_count();
  header["width"] = record.width;
  header["height"] = record.height;
  out << header.dump() << '\n';

  for (int i = 0; i < record.frame_count(); ++i) {
    json rec;
    rec["type"] = "point";
    rec["frame"] = i;
    rec["x"] = record.points[i].x;
    rec["y"] = record.points[i].y;
    rec["flag"] = point_flag_name(record.flags[i]);
    out << rec.dump() << '\n';
  }
  for (std::size_t t = 0; t < record.pairs.size(); ++t) {
    const RunRecord::Pair& pair = record.pairs[t];
    json rec;
    rec["type"] = "homography";
    rec["frame"] = static_cast<int>(t) + 1;
    rec["h"] = homography_to_json(pair.h);
    rec["matches"] = pair.match_count;
    rec["inliers"] = pair.inlier_count;
    rec["bridged"] = pair.bridged;
    out << rec.dump() << '\n';
  }
  return out.str();
}

void export_run(const RunRecord& record, const std::filesystem::path& path) {
  write_file(export_run_string(record), path);
}

RunRecord import_run(const std::filesystem::path& path) {
  const std::vector<json> records = read_document(path, "piste-traj/1");
  const json& header = records.front();
  const int frames = header.at("frames").get<int>();
  if (frames < 1) {
    throw Error(ErrorCode::ParseError, "document declares no frames");
  }

  RunRecord rec;
  rec.width = header.value("width", 0);
  rec.height = header.value("height", 0);
  rec.points.assign(frames, Point2{});
  rec.flags.assign(frames, PointFlag::measured);
  rec.pairs.assign(frames > 1 ? frames - 1 : 0, RunRecord::Pair{});
  std::vector<bool> have_point(frames, false);
  std::vector<bool> have_pair(rec.pairs.size(), false);

  try {
    for (std::size_t i = 1; i < records.size(); ++i) {
      const json& r = records[i];
      const std::string type = r.at("type").get<std::string>();
      const int frame = r.at("frame").get<int>();
      if (type == "point") {
        if (frame < 0 || frame >= frames || have_point[frame]) {
          throw Error(ErrorCode::ParseError,
                      "bad or duplicate point record for frame " +
                          std::to_string(frame));
        }
        rec.points[frame] = Point2{r.at("x").get<double>(),
                                   r.at("y").get<double>()};
        rec.flags[frame] =
            point_flag_from_name(r.at("flag").get<std::string>());
        have_point[frame] = true;
      } else if (type == "homography") {
        if (frame < 1 || frame >= frames || have_pair[frame - 1]) {
          throw Error(ErrorCode::ParseError,
                      "bad or duplicate homography record for frame " +
                          std::to_string(frame));
        }
        RunRecord::Pair& pair = rec.pairs[frame - 1];
        pair.h = homography_from_json(r.at("h"));
        pair.match_count = r.at("matches").get<int>();
        pair.inlier_count = r.at("inliers").get<int>();
        pair.bridged = r.at("bridged").get<bool>();
        have_pair[frame - 1] = true;
      } else {
        throw Error(ErrorCode::ParseError, "unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }

  for (int i = 0; i < frames; ++i) {
    if (!have_point[i]) {
      throw Error(ErrorCode::ParseError,
                  "missing point record for frame " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < have_pair.size(); ++i) {
    if (!have_pair[i]) {
      throw Error(ErrorCode::ParseError,
                  "missing homography record for frame " +
                      std::to_string(i + 1));
    }
  }
  return rec;
}

std::string ground_truth_string(const GroundTruth& truth) {
  std::ostringstream out;
  json header;
  header["schema"] = "piste-truth/1";
  header["frames"] = truth.boxes.size();
  out << header.dump() << '\n';
  for (std::size_t t = 0; t < truth.boxes.size(); ++t) {
    const BBox& b = truth.boxes[t];
    json rec;
    rec["type"] = "box";
    rec["frame"] = t;
    rec["x"] = b.x;
    rec["y"] = b.y;
    rec["w"] = b.w;
    rec["h"] = b.h;
    rec["foot_x"] = truth.footpoints[t].x;
    rec["foot_y"] = truth.footpoints[t].y;
    out << rec.dump() << '\n';
  }
  for (std::size_t t = 0; t < truth.pair_h.size(); ++t) {
    json rec;
    rec["type"] = "homography";
    rec["frame"] = t + 1;
    rec["h"] = homography_to_json(truth.pair_h[t]);
    out << rec.dump() << '\n';
  }
  return out.str();
}

void save_ground_truth(const GroundTruth& truth,
                       const std::filesystem::path& path) {
  write_file(ground_truth_string(truth), path);
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  const std::vector<json> records = read_document(path, "piste-truth/1");
  const int frames = records.front().at("frames").get<int>();
  GroundTruth truth;
  truth.boxes.assign(frames, BBox{});
  truth.footpoints.assign(frames, Point2{});
  truth.pair_h.assign(frames > 1 ? frames - 1 : 0, Homography{});
  try {
    for (std::size_t i = 1; i < records.size(); ++i) {
      const json& r = records[i];
      const std::string type = r.at("type").get<std::string>();
      const int frame = r.at("frame").get<int>();
      if (type == "box") {
        if (frame < 0 || frame >= frames) {
          throw Error(ErrorCode::ParseError, "box record out of range");
        }
        truth.boxes[frame] = BBox{r.at("x").get<double>(), r.at("y").get<double>(),
                                  r.at("w").get<double>(), r.at("h").get<double>()};
        truth.footpoints[frame] =
            Point2{r.at("foot_x").get<double>(), r.at("foot_y").get<double>()};
      } else if (type == "homography") {
        if (frame < 1 || frame >= frames) {
          throw Error(ErrorCode::ParseError, "homography record out of range");
        }
        truth.pair_h[frame - 1] = homography_from_json(r.at("h"));
      } else {
        throw Error(ErrorCode::ParseError, "unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return truth;
}

void write_track_csv(std::span<const BBox> boxes,
                     const std::filesystem::path& path) {
  std::ostringstream out;
  out << "frame,x,y,w,h\n";
  out.precision(17);
  for (std::size_t t = 0; t < boxes.size(); ++t) {
    out << t << ',' << boxes[t].x << ',' << boxes[t].y << ',' << boxes[t].w
        << ',' << boxes[t].h << '\n';
  }
  write_file(out.str(), path);
}

std::string overlays_string(std::span<const OverlayFrame> overlays) {
  std::ostringstream out;
  json header;
  header["schema"] = "piste-compare/1";
  header["ref_frames"] = overlays.size();
  out << header.dump() << '\n';
  for (const OverlayFrame& o : overlays) {
    json rec;
    rec["type"] = "overlay";
    rec["ref_frame"] = o.ref_frame;
    rec["other_frame"] = o.other_frame;
    rec["status"] = overlay_status_name(o.status);
    if (o.status == OverlayStatus::ok) {
      rec["h"] = homography_to_json(o.other_to_ref);
      rec["matches"] = o.match_count;
      rec["inliers"] = o.inlier_count;
      json pts = json::array();
      json flags = json::array();
      for (std::size_t i = 0; i < o.points.size(); ++i) {
        pts.push_back(json::array({o.points[i].x, o.points[i].y}));
        flags.push_back(point_flag_name(o.flags[i]));
      }
      rec["points"] = std::move(pts);
      rec["flags"] = std::move(flags);
    }
    out << rec.dump() << '\n';
  }
  return out.str();
}

void export_overlays(std::span<const OverlayFrame> overlays,
                     const std::filesystem::path& path) {
  write_file(overlays_string(overlays), path);
}

}  // namespace piste
