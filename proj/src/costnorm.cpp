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

#include "stereoadapt/costnorm.hpp"

#include <cmath>

#include "stereoadapt/parallel.hpp"

namespace stereoadapt {

NormConfig parse_cost_norm(std::string_view mode, double epsilon) {
  NormConfig cfg;
  cfg.epsilon = epsilon;
  if (mode == "on") return cfg;
  if (mode == "off") {
    cfg.apply_channel = cfg.apply_pixel = false;
  } else if (mode == "channel-only") {
    cfg.apply_pixel = false;
  } else if (mode == "pixel-only") {
    cfg.apply_channel = false;
  } else {
    throw Error("unknown cost-norm mode '" + std::string(mode) + "'");
  }
  return cfg;
}

std::string cost_norm_name(const NormConfig& cfg) {
  if (cfg.apply_channel && cfg.apply_pixel) return "on";
  if (cfg.apply_channel) return "channel-only";
  if (cfg.apply_pixel) return "pixel-only";
  return "off";
}

FeatureMap channel_normalize(const FeatureMap& f, double eps) {
  if (!(eps > 0.0)) throw Error("epsilon must be positive");
  FeatureMap out = f;
  parallel_for(0, f.channels(), [&](int c) {
    double sum = 0.0;
    for (double v : f.plane(c)) sum += v * v;
    const double denom = std::sqrt(sum + eps);
    for (double& v : out.plane(c)) v /= denom;
  });
  return out;
}

FeatureMap pixel_normalize(const FeatureMap& f, double eps) {
  if (!(eps > 0.0)) throw Error("epsilon must be positive");
  FeatureMap out = f;
  const int channels = f.channels();
  const int w = f.width();
  parallel_for(0, f.height(), [&](int y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int c = 0; c < channels; ++c) sum += f.at(c, y, x) * f.at(c, y, x);
      const double denom = std::sqrt(sum + eps);
      for (int c = 0; c < channels; ++c) out.at(c, y, x) /= denom;
    }
  });
  return out;
}

std::pair<FeatureMap, FeatureMap> cost_normalize(const FeatureMap& left, const FeatureMap& right,
                                                 const NormConfig& cfg) {
  if (!left.same_shape(right)) throw Error("left and right feature maps differ in shape");
  auto run = [&](const FeatureMap& f) {
    FeatureMap out = cfg.apply_channel ? channel_normalize(f, cfg.epsilon) : f;
    if (cfg.apply_pixel) out = pixel_normalize(out, cfg.epsilon);
    return out;
  };
  return {run(left), run(right)};
}

}  // namespace stereoadapt
