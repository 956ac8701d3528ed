// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>

namespace piste {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) {
      throw Error(ErrorCode::IoError, "libpng allocation failed");
    }
  }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) {
      throw Error(ErrorCode::IoError, "libpng allocation failed");
    }
  }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr fp(std::fopen(path.string().c_str(), mode));
  if (!fp) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  return fp;
}

// Decodes to 8-bit, `channels` = 3 (RGB) or 1 (gray).
std::vector<std::uint8_t> decode_png(const std::filesystem::path& path,
                                     int channels, int& width, int& height) {
  FilePtr fp = open_file(path, "rb");
  PngReader reader;
  std::vector<std::uint8_t> data;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(reader.png))) {
    throw Error(ErrorCode::DecodeError, "failed to decode " + path.string());
  }
  png_init_io(reader.png, fp.get());
  png_read_info(reader.png, reader.info);

  png_set_strip_16(reader.png);
  png_set_packing(reader.png);
  const int color_type = png_get_color_type(reader.png, reader.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(reader.png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(reader.png, reader.info) < 8) {
    png_set_expand_gray_1_2_4_to_8(reader.png);
  }
  if (png_get_valid(reader.png, reader.info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(reader.png);
  }
  png_set_strip_alpha(reader.png);
  if (channels == 3) {
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(reader.png);
    }
  } else {
    if (color_type == PNG_COLOR_TYPE_RGB ||
        color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
        color_type == PNG_COLOR_TYPE_PALETTE) {
      png_set_rgb_to_gray_fixed(reader.png, 1, -1, -1);
    }
  }
  png_read_update_info(reader.png, reader.info);

  width = static_cast<int>(png_get_image_width(reader.png, reader.info));
  height = static_cast<int>(png_get_image_height(reader.png, reader.info));
  const std::size_t rowbytes = png_get_rowbytes(reader.png, reader.info);
  if (rowbytes != static_cast<std::size_t>(width) * channels) {
    throw Error(ErrorCode::DecodeError,
                "unexpected channel layout in " + path.string());
  }
  data.resize(static_cast<std::size_t>(height) * rowbytes);
  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = data.data() + static_cast<std::size_t>(y) * rowbytes;
  }
  png_read_image(reader.png, rows.data());
  png_read_end(reader.png, nullptr);
  return data;
}

}  // namespace

Frame load_png_rgb(const std::filesystem::path& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> rgb = decode_png(path, 3, w, h);
  return Frame(w, h, std::move(rgb));
}

void save_png_rgb(const Frame& frame, const std::filesystem::path& path) {
  FilePtr fp = open_file(path, "wb");
  PngWriter writer;
  std::vector<png_bytep> rows(frame.height());

  if (setjmp(png_jmpbuf(writer.png))) {
    throw Error(ErrorCode::IoError, "failed to write " + path.string());
  }
  png_init_io(writer.png, fp.get());
  png_set_IHDR(writer.png, writer.info, frame.width(), frame.height(), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(writer.png, writer.info);
  const std::uint8_t* base = frame.rgb().data();
  for (int y = 0; y < frame.height(); ++y) {
    rows[y] = const_cast<png_bytep>(
        base + static_cast<std::size_t>(y) * frame.width() * 3);
  }
  png_write_image(writer.png, rows.data());
  png_write_end(writer.png, nullptr);
}

std::pair<int, int> png_dimensions(const std::filesystem::path& path) {
  FilePtr fp = open_file(path, "rb");
  PngReader reader;
  if (setjmp(png_jmpbuf(reader.png))) {
    throw Error(ErrorCode::DecodeError, "failed to decode " + path.string());
  }
  png_init_io(reader.png, fp.get());
  png_read_info(reader.png, reader.info);
  return {static_cast<int>(png_get_image_width(reader.png, reader.info)),
          static_cast<int>(png_get_image_height(reader.png, reader.info))};
}

StaticMask load_mask_png(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const std::vector<std::uint8_t> gray = decode_png(path, 1, w, h);
  StaticMask mask;
  mask.width = w;
  mask.height = h;
  mask.bits.resize(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    mask.bits[i] = gray[i] != 0 ? 1 : 0;
  }
  return mask;
}

Frame FrameSequence::load(int index) const {
  if (index < 0 || index >= size()) {
    throw Error(ErrorCode::ConfigError,
                "frame index " + std::to_string(index) + " out of range");
  }
  Frame frame = load_png_rgb(files[index]);
  if (frame.width() != width || frame.height() != height) {
    throw Error(ErrorCode::DimensionMismatch,
                files[index].string() + " changed size on disk");
  }
  return frame;
}

FrameSequence load_sequence(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::EmptyDirectory,
                dir.string() + " is not a directory");
  }
  FrameSequence seq;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ".png") {
      seq.files.push_back(entry.path());
    }
  }
  std::sort(seq.files.begin(), seq.files.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.filename().string() < b.filename().string();
            });
  if (seq.files.size() < 2) {
    throw Error(ErrorCode::EmptyDirectory,
                dir.string() + " holds " + std::to_string(seq.files.size()) +
                    " PNG frames; need at least 2");
  }
  for (std::size_t i = 0; i < seq.files.size(); ++i) {
    const auto [w, h] = png_dimensions(seq.files[i]);
    if (i == 0) {
      seq.width = w;
      seq.height = h;
    } else if (w != seq.width || h != seq.height) {
      throw Error(ErrorCode::DimensionMismatch,
                  seq.files[i].string() + " is " + std::to_string(w) + "x" +
                      std::to_string(h) + ", expected " +
                      std::to_string(seq.width) + "x" +
                      std::to_string(seq.height));
    }
  }
  return seq;
}

}  // namespace piste
