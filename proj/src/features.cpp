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

#include "stereoadapt/features.hpp"

#include <algorithm>

namespace stereoadapt {

int FeatureConfig::channel_count() const {
  return (include_intensity ? 1 : 0) + (include_gradients ? 2 : 0) + census_window * census_window - 1;
}

void FeatureConfig::validate() const {
  if (downsample < 1) throw Error("feature stride must be >= 1");
  if (census_window < 3 || census_window % 2 == 0) throw Error("census window must be odd and >= 3");
}

GrayImage area_downsample(const GrayImage& gray, int stride) {
  if (stride == 1) return gray;
  const int w = gray.width() / stride;
  const int h = gray.height() / stride;
  GrayImage out(w, h);
  const double inv = 1.0 / (stride * stride);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = 0; dy < stride; ++dy) {
        for (int dx = 0; dx < stride; ++dx) sum += gray.at(y * stride + dy, x * stride + dx);
      }
      out.at(y, x) = sum * inv;
    }
  }
  return out;
}

FeatureMap extract_features(const Image& img, const FeatureConfig& cfg) {
  cfg.validate();
  const GrayImage gray = area_downsample(to_grayscale(img), cfg.downsample);
  const int w = gray.width();
  const int h = gray.height();
  if (w < cfg.census_window || h < cfg.census_window) throw Error("image too small");

  auto px = [&](int y, int x) {
    return gray.at(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1));
  };

  FeatureMap out(cfg.channel_count(), h, w);
  int ch = 0;
  if (cfg.include_intensity) {
    std::copy(gray.data().begin(), gray.data().end(), out.plane(ch).begin());
    ++ch;
  }
  if (cfg.include_gradients) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(ch, y, x) = (px(y - 1, x + 1) + 2.0 * px(y, x + 1) + px(y + 1, x + 1)) -
                           (px(y - 1, x - 1) + 2.0 * px(y, x - 1) + px(y + 1, x - 1));
        out.at(ch + 1, y, x) = (px(y + 1, x - 1) + 2.0 * px(y + 1, x) + px(y + 1, x + 1)) -
                               (px(y - 1, x - 1) + 2.0 * px(y - 1, x) + px(y - 1, x + 1));
      }
    }
    ch += 2;
  }
  const int r = cfg.census_window / 2;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dy == 0 && dx == 0) continue;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) out.at(ch, y, x) = px(y + dy, x + dx) > px(y, x) ? 1.0 : 0.0;
      }
      ++ch;
    }
  }
  return out;
}

}  // namespace stereoadapt
