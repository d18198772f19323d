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
#include <cstddef>
#include <vector>

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

/// Mean-over-channels correlation for d in [0, d_max):
///   cost[d,y,x] = (1/C) sum_c left[c,y,x] * right[c,y,x-d].
/// Entries with x - d < 0 hold 0 and are marked invalid.
CostVolume correlation_volume(const FeatureMap& left, const FeatureMap& right, int d_max);

/// 2C x D x H x W concatenation volume: channels [0,C) carry the left
/// features, [C,2C) the right features shifted by d (0 outside the frame).
class ConcatVolume {
 public:
  ConcatVolume(int channels, int disparities, int height, int width);

  int channels() const { return channels_; }
  int disparities() const { return disparities_; }
  int height() const { return height_; }
  int width() const { return width_; }

  double& at(int c, int d, int y, int x) { return data_[index(c, d, y, x)]; }
  double at(int c, int d, int y, int x) const { return data_[index(c, d, y, x)]; }

 private:
  std::size_t index(int c, int d, int y, int x) const {
    return ((static_cast<std::size_t>(c) * disparities_ + d) * height_ + y) * width_ + x;
  }

  int channels_, disparities_, height_, width_;
  std::vector<double> data_;
};

ConcatVolume concat_volume(const FeatureMap& left, const FeatureMap& right, int d_max);

/// Unit-width bins over [0, 30).
inline constexpr int kHistogramBins = 30;

struct Histogram {
  std::array<double, kHistogramBins + 1> bin_edges{};
  std::array<double, kHistogramBins> proportions{};
  std::array<std::size_t, kHistogramBins> counts{};
  std::size_t underflow = 0;
  std::size_t overflow = 0;
  std::size_t in_range = 0;
};

/// Distribution of valid cost values. Proportions are taken over in-range
/// values; values < 0 and >= 30 are only counted. Throws on an empty volume.
Histogram cost_histogram(const CostVolume& vol);

}  // namespace stereoadapt
