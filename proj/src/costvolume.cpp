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

#include "stereoadapt/costvolume.hpp"

#include <cmath>

#include "stereoadapt/parallel.hpp"

namespace stereoadapt {

namespace {

void check_inputs(const FeatureMap& left, const FeatureMap& right, int d_max) {
  if (!left.same_shape(right)) throw Error("left and right feature maps differ in shape");
  if (left.channels() < 1) throw Error("feature maps need at least one channel");
  if (d_max < 1) throw Error("d_max must be >= 1");
  if (d_max > left.width()) throw Error("d_max exceeds feature width");
}

}  // namespace

CostVolume correlation_volume(const FeatureMap& left, const FeatureMap& right, int d_max) {
  check_inputs(left, right, d_max);
  const int channels = left.channels();
  const int h = left.height();
  const int w = left.width();
  const double inv_c = 1.0 / channels;
  CostVolume vol(d_max, h, w);
  parallel_for(0, d_max, [&](int d) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x - d < 0) {
          vol.set_valid(d, y, x, false);
          continue;
        }
        double sum = 0.0;
        for (int c = 0; c < channels; ++c) sum += left.at(c, y, x) * right.at(c, y, x - d);
        vol.at(d, y, x) = sum * inv_c;
      }
    }
  });
  return vol;
}

ConcatVolume::ConcatVolume(int channels, int disparities, int height, int width)
    : channels_(channels),
      disparities_(disparities),
      height_(height),
      width_(width),
      data_(static_cast<std::size_t>(channels) * disparities * height * width, 0.0) {}

ConcatVolume concat_volume(const FeatureMap& left, const FeatureMap& right, int d_max) {
  check_inputs(left, right, d_max);
  const int channels = left.channels();
  const int h = left.height();
  const int w = left.width();
  ConcatVolume vol(2 * channels, d_max, h, w);
  parallel_for(0, d_max, [&](int d) {
    for (int c = 0; c < channels; ++c) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          vol.at(c, d, y, x) = left.at(c, y, x);
          if (x - d >= 0) vol.at(channels + c, d, y, x) = right.at(c, y, x - d);
        }
      }
    }
  });
  return vol;
}

Histogram cost_histogram(const CostVolume& vol) {
  Histogram hist;
  for (int i = 0; i <= kHistogramBins; ++i) hist.bin_edges[i] = i;

  std::size_t seen = 0;
  const auto data = vol.data();
  const auto valid = vol.validity();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!valid[i]) continue;
    ++seen;
    const double v = data[i];
    if (std::isnan(v)) throw Error("cost volume holds NaN");
    if (v < 0.0) {
      ++hist.underflow;
    } else if (v >= kHistogramBins) {
      ++hist.overflow;
    } else {
      ++hist.counts[static_cast<int>(std::floor(v))];
      ++hist.in_range;
    }
  }
  if (seen == 0) throw Error("cost histogram of an empty volume");
  if (hist.in_range > 0) {
    for (int b = 0; b < kHistogramBins; ++b) {
      hist.proportions[b] = static_cast<double>(hist.counts[b]) / static_cast<double>(hist.in_range);
    }
  }
  return hist;
}

}  // namespace stereoadapt
