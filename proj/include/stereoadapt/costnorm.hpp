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
#include <utility>

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

struct NormConfig {
  double epsilon = 1e-20;
  bool apply_channel = true;
  bool apply_pixel = true;
};

/// Parses the `--cost-norm` selector: on, off, channel-only, pixel-only.
NormConfig parse_cost_norm(std::string_view mode, double epsilon = 1e-20);
std::string cost_norm_name(const NormConfig& cfg);

/// Divides every channel by its spatial L2 norm: f / sqrt(sum_{h,w} f^2 + eps).
FeatureMap channel_normalize(const FeatureMap& f, double eps);

/// Divides every per-pixel feature vector by its L2 norm over channels:
/// f / sqrt(sum_c f^2 + eps).
FeatureMap pixel_normalize(const FeatureMap& f, double eps);

/// Channel normalisation followed by pixel normalisation, applied to each
/// view independently. No mean subtraction happens anywhere.
std::pair<FeatureMap, FeatureMap> cost_normalize(const FeatureMap& left, const FeatureMap& right,
                                                 const NormConfig& cfg = {});

}  // namespace stereoadapt
