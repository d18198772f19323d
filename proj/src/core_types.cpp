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

#include "stereoadapt/core_types.hpp"

#include <algorithm>
#include <cmath>

namespace stereoadapt {

Planar::Planar(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 0 || height < 0 || width < 0) throw Error("negative tensor dimension");
  data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

bool Planar::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool Image::is_valid() const {
  if (width() < 2 || height() < 2 || channels() != 3) return false;
  const auto d = data();
  return std::all_of(d.begin(), d.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; });
}

CostVolume::CostVolume(int disparities, int height, int width)
    : Planar(disparities, height, width, 0.0), valid_(size(), 1) {
  if (disparities < 1) throw Error("cost volume needs at least one disparity");
}

std::size_t PixelMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool DisparityMap::is_valid(double max_disparity) const {
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) {
      if (!valid(y, x)) continue;
      const double d = at(y, x);
      if (!std::isfinite(d) || d < 0.0 || d > max_disparity) return false;
    }
  }
  return true;
}

bool OcclusionMask::is_valid() const {
  for (double v : values()) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    if (kind_ == OcclusionKind::kOracle && v != 0.0 && v != 1.0) return false;
  }
  return true;
}

Sample bilinear_sample(const Image& img, double x, double y) {
  Sample out;
  const int w = img.width();
  const int h = img.height();
  if (!(x >= 0.0 && y >= 0.0 && x <= w - 1 && y <= h - 1)) return out;

  // Clamp the cell origin so lattice points on the far edge stay in bounds.
  const int x0 = std::min(static_cast<int>(std::floor(x)), std::max(w - 2, 0));
  const int y0 = std::min(static_cast<int>(std::floor(y)), std::max(h - 2, 0));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double tx = x - x0;
  const double ty = y - y0;
  for (int c = 0; c < 3; ++c) {
    const double top = (1.0 - tx) * img.at(c, y0, x0) + tx * img.at(c, y0, x1);
    const double bottom = (1.0 - tx) * img.at(c, y1, x0) + tx * img.at(c, y1, x1);
    out.color[c] = (1.0 - ty) * top + ty * bottom;
  }
  out.in_bounds = true;
  return out;
}

GrayImage to_grayscale(const Image& img) {
  GrayImage gray(img.width(), img.height());
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  auto out = gray.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i], 0.0, 1.0);
  }
  return gray;
}

}  // namespace stereoadapt
