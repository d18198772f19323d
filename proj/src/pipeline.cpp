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

#include "stereoadapt/pipeline.hpp"

#include "stereoadapt/costvolume.hpp"

namespace stereoadapt {

CostVolume build_cost_volume(const Image& left, const Image& right, const PipelineConfig& cfg) {
  if (left.width() != right.width() || left.height() != right.height()) {
    throw Error("left and right views differ in size");
  }
  const FeatureMap fl = extract_features(left, cfg.features);
  const FeatureMap fr = extract_features(right, cfg.features);
  const auto [nl, nr] = cost_normalize(fl, fr, cfg.norm);
  return correlation_volume(nl, nr, cfg.d_max);
}

PipelineResult estimate_disparity(const Image& left, const Image& right, const PipelineConfig& cfg) {
  const CostVolume vol = build_cost_volume(left, right, cfg);
  RegressionConfig reg = cfg.regression;
  reg.disparity_scale = cfg.features.downsample;
  PipelineResult out;
  out.coarse = regress_disparity(vol, reg);
  out.disparity = upsample_disparity(out.coarse, cfg.features.downsample, left.width(), left.height());
  return out;
}

}  // namespace stereoadapt
