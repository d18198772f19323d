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
#include "stereoadapt/costnorm.hpp"
#include "stereoadapt/disparity.hpp"
#include "stereoadapt/features.hpp"

namespace stereoadapt {

/// features -> cost normalisation -> correlation -> regression.
struct PipelineConfig {
  FeatureConfig features;
  NormConfig norm;
  /// Candidate disparities at feature resolution; full-resolution range is
  /// features.downsample * d_max.
  int d_max = 128;
  RegressionConfig regression;
};

CostVolume build_cost_volume(const Image& left, const Image& right, const PipelineConfig& cfg);

struct PipelineResult {
  /// Full-resolution disparity in full-resolution pixels.
  DisparityMap disparity;
  /// Feature-resolution disparity, also in full-resolution pixels.
  DisparityMap coarse;
};

PipelineResult estimate_disparity(const Image& left, const Image& right, const PipelineConfig& cfg);

}  // namespace stereoadapt
