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

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

struct FeatureConfig {
  int downsample = 2;
  int census_window = 3;
  bool include_gradients = true;
  bool include_intensity = true;

  /// Number of output channels implied by this configuration.
  int channel_count() const;
  void validate() const;
};

/// Training-free descriptors at 1/downsample resolution (floor division).
///
/// The image is converted to grayscale and area-averaged by the stride, then
/// emits, in order: intensity, Sobel-x, Sobel-y, and one binary census
/// channel per neighbour of the census window (row-major, centre skipped;
/// 1.0 when the neighbour is strictly brighter than the centre). Borders use
/// replicate padding. Throws "image too small" when the downsampled raster is
/// smaller than the census window.
FeatureMap extract_features(const Image& img, const FeatureConfig& cfg = {});

/// Area-average downsampling by an integer stride; trailing rows/columns
/// that do not fill a full block are dropped.
GrayImage area_downsample(const GrayImage& gray, int stride);

}  // namespace stereoadapt
