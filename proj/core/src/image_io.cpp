// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsx/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace gsx {
namespace {

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

void write(const std::filesystem::path& path, int width, int height, int color_type, int channels,
           const std::vector<std::uint8_t>& pixels) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png: failed to encode " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width * channels));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::filesystem::path& path, const Frame& frame) {
  std::vector<std::uint8_t> pixels(frame.color.size());
  std::transform(frame.color.begin(), frame.color.end(), pixels.begin(), to_byte);
  write(path, frame.width, frame.height, PNG_COLOR_TYPE_RGB, 3, pixels);
}

void write_depth_png(const std::filesystem::path& path, const Frame& frame, double max_depth) {
  if (!(max_depth > 0)) throw std::invalid_argument("write_depth_png: max_depth must be positive");
  std::vector<std::uint8_t> pixels(frame.depth.size());
  std::transform(frame.depth.begin(), frame.depth.end(), pixels.begin(),
                 [&](double d) { return is_valid_depth(d) ? to_byte(d / max_depth) : std::uint8_t{0}; });
  write(path, frame.width, frame.height, PNG_COLOR_TYPE_GRAY, 1, pixels);
}

}  // namespace gsx
