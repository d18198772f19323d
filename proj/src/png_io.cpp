// Copyright 2026 The stereoadapt Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include "stereoadapt/dataio.hpp"

namespace stereoadapt {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ErrorSink {
  char message[256] = "libpng error";
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

/// Decoded samples, rows top-down, channels interleaved, 16-bit samples in
/// big-endian byte order as stored by PNG.
struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> bytes;

  unsigned sample(std::size_t i) const {
    return bit_depth == 16 ? (static_cast<unsigned>(bytes[2 * i]) << 8) | bytes[2 * i + 1] : bytes[i];
  }
};

PngPixels decode(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw Error("cannot open " + path.string());
  ErrorSink sink;
  PngPixels out;
  std::vector<png_bytep> rows;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (!png) throw Error("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(path.string() + ": " + sink.message);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.bytes.resize(stride * out.height);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y) rows[y] = out.bytes.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void encode(const std::filesystem::path& path, int width, int height, int channels, int bit_depth,
            const std::vector<std::uint8_t>& bytes) {
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw Error("cannot write " + path.string());
  ErrorSink sink;
  const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(bytes.data() + stride * y);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (!png) throw Error("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(path.string() + ": " + sink.message);
  }
  png_init_io(png, file.get());
  const int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Png16Raster read_png16(const std::filesystem::path& path) {
  const PngPixels px = decode(path);
  if (px.bit_depth != 16 || px.channels != 1) {
    throw Error(path.string() + ": expected a 16-bit single-channel PNG");
  }
  Png16Raster r{px.width, px.height, std::vector<std::uint16_t>(static_cast<std::size_t>(px.width) * px.height)};
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] = static_cast<std::uint16_t>(px.sample(i));
  return r;
}

void write_png16(const std::filesystem::path& path, const Png16Raster& r) {
  if (r.data.size() != static_cast<std::size_t>(r.width) * r.height) throw Error("PNG raster size mismatch");
  std::vector<std::uint8_t> bytes(r.data.size() * 2);
  for (std::size_t i = 0; i < r.data.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(r.data[i] >> 8);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(r.data[i] & 0xff);
  }
  encode(path, r.width, r.height, 1, 16, bytes);
}

DisparityMap png16_to_disparity(const Png16Raster& r) {
  DisparityMap d(r.width, r.height, 0.0, false);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const std::uint16_t raw = r.data[static_cast<std::size_t>(y) * r.width + x];
      if (raw == 0) continue;
      d.at(y, x) = raw / 256.0;
      d.set_valid(y, x, true);
    }
  }
  return d;
}

Png16Raster disparity_to_png16(const DisparityMap& d) {
  Png16Raster r{d.width(), d.height(), std::vector<std::uint16_t>(static_cast<std::size_t>(d.width()) * d.height(), 0)};
  for (int y = 0; y < d.height(); ++y) {
    for (int x = 0; x < d.width(); ++x) {
      if (!d.valid(y, x)) continue;
      const double raw = std::clamp(std::round(d.at(y, x) * 256.0), 1.0, 65535.0);
      r.data[static_cast<std::size_t>(y) * d.width() + x] = static_cast<std::uint16_t>(raw);
    }
  }
  return r;
}

DisparityMap read_disparity_png16(const std::filesystem::path& path) { return png16_to_disparity(read_png16(path)); }

void write_disparity_png16(const std::filesystem::path& path, const DisparityMap& disp) {
  write_png16(path, disparity_to_png16(disp));
}

Image read_image(const std::filesystem::path& path) {
  const PngPixels px = decode(path);
  const double max_value = px.bit_depth == 16 ? 65535.0 : 255.0;
  const bool gray = px.channels <= 2;
  Image img(px.width, px.height);
  const std::size_t n = static_cast<std::size_t>(px.width) * px.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const std::size_t s = i * px.channels + (gray ? 0 : c);
      img.plane(c)[i] = px.sample(s) / max_value;
    }
  }
  return img;
}

void write_image(const std::filesystem::path& path, const Image& img) {
  const std::size_t n = img.plane_size();
  std::vector<std::uint8_t> bytes(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) bytes[i * 3 + c] = to_byte(img.plane(c)[i]);
  }
  encode(path, img.width(), img.height(), 3, 8, bytes);
}

void write_gray(const std::filesystem::path& path, const Planar& gray) {
  if (gray.channels() != 1) throw Error("write_gray expects a single-channel raster");
  std::vector<std::uint8_t> bytes(gray.plane_size());
  const auto src = gray.plane(0);
  std::transform(src.begin(), src.end(), bytes.begin(), to_byte);
  encode(path, gray.width(), gray.height(), 1, 8, bytes);
}

LabelMap read_label_png(const std::filesystem::path& path) {
  const PngPixels px = decode(path);
  if (px.channels != 1 || px.bit_depth != 8) throw Error(path.string() + ": expected an 8-bit label PNG");
  LabelMap labels(px.width, px.height);
  for (int y = 0; y < px.height; ++y) {
    for (int x = 0; x < px.width; ++x) {
      const unsigned id = px.sample(static_cast<std::size_t>(y) * px.width + x);
      labels.at(y, x) = id == 255 ? -1 : static_cast<int>(id);
    }
  }
  return labels;
}

DisparityMap read_disparity(const std::filesystem::path& path) {
  if (path.extension() == ".pfm") return read_pfm_disparity(path);
  if (path.extension() == ".png") return read_disparity_png16(path);
  throw Error("unsupported disparity format: " + path.string());
}

void write_disparity(const std::filesystem::path& path, const DisparityMap& disp) {
  if (path.extension() == ".pfm") return write_pfm_disparity(path, disp);
  if (path.extension() == ".png") return write_disparity_png16(path, disp);
  throw Error("unsupported disparity format: " + path.string());
}

}  // namespace stereoadapt
