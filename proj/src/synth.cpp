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

#include <random>

#include "stereoadapt/dataio.hpp"
#include "stereoadapt/reconstruction.hpp"

namespace stereoadapt {

SyntheticPair synth_rds(int width, int height, int shift, std::optional<Rect> occluder, std::uint64_t seed) {
  if (width < 8 || height < 2) throw Error("synthetic pair too small");
  if (shift < 0 || 4 * shift >= width) throw Error("shift must satisfy 0 <= shift < width/4");
  const Rect fg = occluder.value_or(Rect{width / 4, height / 4, width / 2, height / 2});
  if (fg.x < shift || fg.y < 0 || fg.width <= 0 || fg.height <= 0 || fg.x + fg.width > width ||
      fg.y + fg.height > height) {
    throw Error("foreground rectangle must lie inside the frame with x >= shift");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, 255);
  auto dot = [&] { return level(rng) / 255.0; };

  SyntheticPair out{Image(width, height), Image(width, height), DisparityMap(width, height, 0.0, true),
                    OcclusionMask(width, height, OcclusionKind::kOracle), fg};
  for (int c = 0; c < 3; ++c) {
    for (double& v : out.left.plane(c)) v = dot();
  }
  out.right = out.left;

  for (int y = fg.y; y < fg.y + fg.height; ++y) {
    for (int x = fg.x; x < fg.x + fg.width; ++x) out.disparity.at(y, x) = shift;
    // Background disoccluded in the right view gets fresh dots.
    for (int x = fg.x + fg.width - shift; x < fg.x + fg.width; ++x) {
      for (int c = 0; c < 3; ++c) out.right.at(c, y, x) = dot();
    }
    for (int x = fg.x; x < fg.x + fg.width; ++x) {
      for (int c = 0; c < 3; ++c) out.right.at(c, y, x - shift) = out.left.at(c, y, x);
    }
  }

  out.occlusion = occlusion_oracle(out.disparity);
  // The band of background just left of the foreground is hidden in the right view.
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool band = y >= fg.y && y < fg.y + fg.height && x >= fg.x - shift && x < fg.x;
      if ((out.occlusion.at(y, x) == 1.0) != band) throw Error("synthetic occlusion does not match construction");
    }
  }
  return out;
}

}  // namespace stereoadapt
