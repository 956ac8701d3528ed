// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "piste/frame.hpp"
#include "piste/masking.hpp"

namespace piste {

// 8-bit RGB PNG I/O. Gray/palette/alpha inputs are converted on read;
// 16-bit channels are stripped to 8.
Frame load_png_rgb(const std::filesystem::path& path);
void save_png_rgb(const Frame& frame, const std::filesystem::path& path);

// Reads only the header.
std::pair<int, int> png_dimensions(const std::filesystem::path& path);

// Single-channel exclusion mask: any nonzero pixel is excluded. RGB inputs
// are collapsed to luma first.
StaticMask load_mask_png(const std::filesystem::path& path);

/// Lexicographically ordered PNG frame directory; file order is temporal
/// order. Frames are decoded on demand.
struct FrameSequence {
  std::vector<std::filesystem::path> files;
  int width = 0;
  int height = 0;

  int size() const { return static_cast<int>(files.size()); }
  Frame load(int index) const;
};

// Requires >= 2 decodable PNG files of uniform dimensions. Throws
// EmptyDirectory, DimensionMismatch (naming the offending file) or
// DecodeError.
FrameSequence load_sequence(const std::filesystem::path& dir);

}  // namespace piste
