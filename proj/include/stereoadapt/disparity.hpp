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

#include <string>
#include <string_view>

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

enum class RegressionMode { kSoftArgmin, kWta };

RegressionMode parse_regression_mode(std::string_view name);
std::string to_string(RegressionMode mode);

struct RegressionConfig {
  RegressionMode mode = RegressionMode::kWta;
  /// Softmax temperature applied to similarities.
  double beta = 1.0;
  /// Box half-width of per-slice cost aggregation; 0 disables it.
  int aggregation_radius = 2;
  /// Multiplier from volume disparity units to output pixels (feature stride).
  double disparity_scale = 1.0;
};

/// Per-slice box mean of the valid entries of each (2r+1)^2 window.
/// Validity is unchanged.
CostVolume box_aggregate(const CostVolume& vol, int radius);

/// Disparity from a similarity volume.
///
/// WTA takes the arg-max over valid d (ties go to the smaller d). Soft-argmin
/// takes sum_d d * softmax_d(beta * cost) over valid d, which equals the usual
/// soft-argmin over costs when cost = -similarity. Pixels without any valid d
/// are invalid. Output values are multiplied by disparity_scale.
DisparityMap regress_disparity(const CostVolume& vol, const RegressionConfig& cfg = {});

/// Nearest-neighbour upsampling of a feature-resolution map to width x height.
/// Values are kept as is; pixels past the last full block replicate the edge.
DisparityMap upsample_disparity(const DisparityMap& disp, int stride, int width, int height);

/// Mean smooth-L1 of pred - gt over pixels valid in both maps.
double smooth_l1_loss(const DisparityMap& pred, const DisparityMap& gt);

/// d(smooth_l1_loss)/d(pred) per pixel; zero outside the joint support.
Planar smooth_l1_grad(const DisparityMap& pred, const DisparityMap& gt);

/// Mean binary cross entropy with predictions clamped to [1e-7, 1 - 1e-7].
double bce_loss(const OcclusionMask& pred, const OcclusionMask& gt);

}  // namespace stereoadapt
