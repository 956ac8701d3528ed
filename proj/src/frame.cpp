// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/frame.hpp"

#include <cmath>
#include <string>

namespace piste {

Frame::Frame(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
  if (width_ < 16 || height_ < 16) {
    throw Error(ErrorCode::ConfigError,
                "frame must be at least 16x16, got " + std::to_string(width_) +
                    "x" + std::to_string(height_));
  }
  const std::size_t expected = static_cast<std::size_t>(width_) * height_ * 3;
  if (rgb_.size() != expected) {
    throw Error(ErrorCode::ConfigError,
                "rgb buffer size " + std::to_string(rgb_.size()) +
                    " does not match " + std::to_string(width_) + "x" +
                    std::to_string(height_) + "x3");
  }
  gray_.resize(static_cast<std::size_t>(width_) * height_);
  for (std::size_t i = 0; i < gray_.size(); ++i) {
    const double r = rgb_[3 * i];
    const double g = rgb_[3 * i + 1];
    const double b = rgb_[3 * i + 2];
    gray_[i] =
        static_cast<std::uint8_t>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
  }
}

Frame Frame::constant(int width, int height, std::array<std::uint8_t, 3> color) {
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) {
    rgb[i] = color[0];
    rgb[i + 1] = color[1];
    rgb[i + 2] = color[2];
  }
  return Frame(width, height, std::move(rgb));
}

}  // namespace piste
