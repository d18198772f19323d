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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

/// Working colour space for statistics transfer.
///  - kLogLab: decorrelated l-alpha-beta space (RGB -> LMS -> log10 -> opponent axes).
///  - kCieLab: CIE L*a*b* under D65, treating inputs as sRGB-encoded.
enum class ColorSpace { kLogLab, kCieLab };

ColorSpace parse_color_space(std::string_view name);
std::string to_string(ColorSpace space);

/// Three-channel raster in working-space units. Unbounded.
class ColorRaster : public Planar {
 public:
  ColorRaster() = default;
  ColorRaster(int width, int height, double fill = 0.0) : Planar(3, height, width, fill) {}
};

/// Per-channel mean and population standard deviation.
struct ColorStats {
  std::array<double, 3> mean{};
  std::array<double, 3> std{};
};

/// Momentum-averaged target statistics. The first update assigns directly.
struct TransferState {
  std::array<double, 3> running_mean{};
  std::array<double, 3> running_std{};
  double gamma = 0.95;
  bool initialized = false;
  ColorSpace space = ColorSpace::kLogLab;
};

/// Per-channel affine map x -> lambda * (x - source_mean) + target_mean.
struct ColorMap {
  std::array<double, 3> lambda{};
  std::array<double, 3> source_mean{};
  std::array<double, 3> target_mean{};

  friend bool operator==(const ColorMap&, const ColorMap&) = default;
};

/// Source std components below this leave that channel unscaled.
inline constexpr double kMinSourceStd = 1e-6;
/// Floor applied to LMS responses before the logarithm.
inline constexpr double kLogFloor = 1.0 / 255.0;

ColorRaster rgb_to_working(const Image& img, ColorSpace space);
/// Inverse conversion; the result is clamped to [0,1].
Image working_to_rgb(const ColorRaster& raster, ColorSpace space);

ColorStats channel_stats(const Planar& raster);

TransferState momentum_update(TransferState state, const ColorStats& sample);

ColorMap fit_color_map(const ColorStats& source, const TransferState& state);
ColorRaster apply_color_map(const ColorRaster& raster, const ColorMap& map);

struct TransferredPair {
  Image left;
  Image right;
  ColorMap map;
};

/// Recolours both views of a stereo pair with one affine map. Source
/// statistics come from the left view so the pair stays photometrically
/// consistent. Throws if the state has never been updated.
TransferredPair transfer_pair(const Image& left, const Image& right, const TransferState& state);

/// Stateful driver for one pass over a source dataset: every step folds the
/// target image's statistics into the running state, then recolours the
/// source pair.
class ProgressiveColorTransfer {
 public:
  explicit ProgressiveColorTransfer(double gamma = 0.95, ColorSpace space = ColorSpace::kLogLab);

  TransferredPair step(const Image& source_left, const Image& source_right, const Image& target);

  const TransferState& state() const { return state_; }

 private:
  TransferState state_;
};

/// Deterministic permutation of [0, n) drawn from a 64-bit seed.
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed);

}  // namespace stereoadapt
