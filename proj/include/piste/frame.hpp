// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "piste/errors.hpp"

namespace piste {

/// Immutable 8-bit RGB image with a derived luma plane.
/// gray = round(0.299 R + 0.587 G + 0.114 B), computed once at construction
/// so detection and tracking are bit-reproducible.
class Frame {
 public:
  Frame(int width, int height, std::vector<std::uint8_t> rgb);

  static Frame constant(int width, int height,
                        std::array<std::uint8_t, 3> color);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& rgb() const { return rgb_; }
  const std::vector<std::uint8_t>& gray() const { return gray_; }

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * width_ + x);
    return {rgb_[i], rgb_[i + 1], rgb_[i + 2]};
  }

  std::uint8_t luma(int x, int y) const {
    return gray_[static_cast<std::size_t>(y) * width_ + x];
  }

  bool same_dims(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> rgb_;
  std::vector<std::uint8_t> gray_;
};

}  // namespace piste
