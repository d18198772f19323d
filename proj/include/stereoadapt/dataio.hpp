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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereoadapt/core_types.hpp"
#include "stereoadapt/metrics.hpp"

namespace stereoadapt {

// ---------------------------------------------------------------------------
// PFM
// ---------------------------------------------------------------------------

/// Decoded PFM payload, rows top-down, channels interleaved.
struct PfmRaster {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 ("Pf") or 3 ("PF")
  double scale = 1.0;  // magnitude of the scale line
  bool little_endian = true;
  std::vector<float> data;

  float at(int y, int x, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// Parses a PFM byte stream. A negative scale line means little-endian
/// samples; the stored raster is bottom-up and is flipped on decode.
PfmRaster decode_pfm(std::string_view bytes);
/// Exact inverse of decode_pfm for rasters whose scale magnitude is kept.
std::string encode_pfm(const PfmRaster& raster);

PfmRaster read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const PfmRaster& raster);

/// Single-channel PFM to disparities; non-finite samples become invalid.
DisparityMap pfm_to_disparity(const PfmRaster& raster);
/// Invalid pixels are written as NaN.
PfmRaster disparity_to_pfm(const DisparityMap& disp);
/// Single-channel PFM holding values in [0,1] to a soft occlusion mask.
OcclusionMask pfm_to_occlusion(const PfmRaster& raster);

DisparityMap read_pfm_disparity(const std::filesystem::path& path);
void write_pfm_disparity(const std::filesystem::path& path, const DisparityMap& disp);

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

/// Raw 16-bit single-channel PNG samples.
struct Png16Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> data;
};

/// Throws unless the file is a 16-bit single-channel PNG.
Png16Raster read_png16(const std::filesystem::path& path);
void write_png16(const std::filesystem::path& path, const Png16Raster& raster);

/// 16-bit disparity convention: value = raw / 256, raw 0 = invalid.
DisparityMap png16_to_disparity(const Png16Raster& raster);
/// Valid disparities are rounded to raw = round(256 d), clamped to
/// [1, 65535]; invalid pixels are 0.
Png16Raster disparity_to_png16(const DisparityMap& disp);

DisparityMap read_disparity_png16(const std::filesystem::path& path);
void write_disparity_png16(const std::filesystem::path& path, const DisparityMap& disp);

/// Any 8/16-bit gray, gray+alpha, RGB, RGBA or palette PNG; gray is
/// replicated to three channels and alpha dropped.
Image read_image(const std::filesystem::path& path);
/// 8-bit RGB; samples are rounded to the nearest 1/255.
void write_image(const std::filesystem::path& path, const Image& img);
/// 8-bit gray PNG from values in [0,1].
void write_gray(const std::filesystem::path& path, const Planar& gray);

/// 8-bit single-channel PNG of class ids; 255 is unlabelled.
LabelMap read_label_png(const std::filesystem::path& path);

/// Disparity map from either a .pfm or a 16-bit .png file.
DisparityMap read_disparity(const std::filesystem::path& path);
void write_disparity(const std::filesystem::path& path, const DisparityMap& disp);

// ---------------------------------------------------------------------------
// Dataset layouts
// ---------------------------------------------------------------------------

enum class Layout {
  kKitti,       // image_2/ image_3/ [disp_occ_0/] [semantic/]
  kSceneFlow,   // frames_*/**/left|right/*.png, disparity/**/left/*.pfm
  kMiddlebury,  // <scene>/im0.png im1.png [disp0GT.pfm]
  kFlatPairs,   // left/ right/ [disp/] [semantic/]
};

Layout parse_layout(std::string_view name);
std::string to_string(Layout layout);

struct StereoPair {
  std::filesystem::path left;
  std::filesystem::path right;
  std::optional<std::filesystem::path> gt_disparity;
  std::optional<std::filesystem::path> semantic;
  /// Path of the left image relative to the dataset root.
  std::filesystem::path relative_left;
};

struct DatasetSpec {
  Layout layout = Layout::kFlatPairs;
  std::filesystem::path root;
};

struct PairListing {
  std::vector<StereoPair> pairs;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Lexicographically ordered pairs. Entries without a right counterpart are
/// skipped and reported. A missing root throws; an empty root lists nothing.
PairListing list_pairs(const DatasetSpec& spec);

// ---------------------------------------------------------------------------
// Synthetic random-dot stereo
// ---------------------------------------------------------------------------

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

struct SyntheticPair {
  Image left;
  Image right;
  DisparityMap disparity;
  OcclusionMask occlusion;
  Rect foreground;
};

/// Random-dot stereo pair: a foreground rectangle at disparity `shift` in
/// front of a zero-disparity background. Samples are multiples of 1/255.
/// Without an explicit occluder the foreground is the centred W/2 x H/2
/// rectangle. Requires 0 <= shift < width / 4 and foreground.x >= shift.
SyntheticPair synth_rds(int width, int height, int shift, std::optional<Rect> occluder, std::uint64_t seed);

}  // namespace stereoadapt
