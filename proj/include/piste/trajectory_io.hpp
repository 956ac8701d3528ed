// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "piste/reconstruction.hpp"
#include "piste/synthetic.hpp"

namespace piste {

// Trajectory export document, schema "piste-traj/1": JSON Lines with a
// header record, one point record per frame (raw footpoint in its own
// frame's coordinates) and one homography record per frame pair. Doubles
// round-trip bitwise.
std::string export_run_string(const RunRecord& record);
void export_run(const RunRecord& record, const std::filesystem::path& path);
RunRecord import_run(const std::filesystem::path& path);

// Ground-truth document, schema "piste-truth/1".
std::string ground_truth_string(const GroundTruth& truth);
void save_ground_truth(const GroundTruth& truth,
                       const std::filesystem::path& path);
GroundTruth load_ground_truth(const std::filesystem::path& path);

// Track CSV matching the tracking module's schema.
void write_track_csv(std::span<const BBox> boxes,
                     const std::filesystem::path& path);

// Comparison overlay document, schema "piste-compare/1".
std::string overlays_string(std::span<const OverlayFrame> overlays);
void export_overlays(std::span<const OverlayFrame> overlays,
                     const std::filesystem::path& path);

}  // namespace piste
