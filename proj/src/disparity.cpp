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

#include "stereoadapt/disparity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stereoadapt/parallel.hpp"

namespace stereoadapt {

RegressionMode parse_regression_mode(std::string_view name) {
  if (name == "wta") return RegressionMode::kWta;
  if (name == "soft-argmin") return RegressionMode::kSoftArgmin;
  throw Error("unknown regression mode '" + std::string(name) + "'");
}

std::string to_string(RegressionMode mode) {
  return mode == RegressionMode::kWta ? "wta" : "soft-argmin";
}

CostVolume box_aggregate(const CostVolume& vol, int radius) {
  if (radius < 0) throw Error("aggregation radius must be >= 0");
  if (radius == 0) return vol;
  CostVolume out = vol;
  const int h = vol.height();
  const int w = vol.width();
  parallel_for(0, vol.disparities(), [&](int d) {
    // Summed-area tables of valid values and valid counts; (h+1) x (w+1).
    std::vector<double> sum(static_cast<std::size_t>(h + 1) * (w + 1), 0.0);
    std::vector<double> cnt(sum.size(), 0.0);
    auto at = [w](std::vector<double>& t, int y, int x) -> double& {
      return t[static_cast<std::size_t>(y) * (w + 1) + x];
    };
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool ok = vol.valid(d, y, x);
        at(sum, y + 1, x + 1) = (ok ? vol.at(d, y, x) : 0.0) + at(sum, y, x + 1) + at(sum, y + 1, x) - at(sum, y, x);
        at(cnt, y + 1, x + 1) = (ok ? 1.0 : 0.0) + at(cnt, y, x + 1) + at(cnt, y + 1, x) - at(cnt, y, x);
      }
    }
    for (int y = 0; y < h; ++y) {
      const int y0 = std::max(0, y - radius), y1 = std::min(h, y + radius + 1);
      for (int x = 0; x < w; ++x) {
        if (!vol.valid(d, y, x)) continue;
        const int x0 = std::max(0, x - radius), x1 = std::min(w, x + radius + 1);
        const double s = at(sum, y1, x1) - at(sum, y0, x1) - at(sum, y1, x0) + at(sum, y0, x0);
        const double n = at(cnt, y1, x1) - at(cnt, y0, x1) - at(cnt, y1, x0) + at(cnt, y0, x0);
        out.at(d, y, x) = s / n;
      }
    }
  });
  return out;
}

DisparityMap regress_disparity(const CostVolume& input, const RegressionConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw Error("softmax temperature must be positive");
  const CostVolume vol = box_aggregate(input, cfg.aggregation_radius);
  const int h = vol.height();
  const int w = vol.width();
  const int depth = vol.disparities();
  DisparityMap out(w, h, 0.0, false);
  parallel_for(0, h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      int best = -1;
      double best_cost = -std::numeric_limits<double>::infinity();
      for (int d = 0; d < depth; ++d) {
        if (vol.valid(d, y, x) && (best < 0 || vol.at(d, y, x) > best_cost)) {
          best = d;
          best_cost = vol.at(d, y, x);
        }
      }
      if (best < 0) continue;
      double disp = best;
      if (cfg.mode == RegressionMode::kSoftArgmin) {
        double z = 0.0, acc = 0.0;
        for (int d = 0; d < depth; ++d) {
          if (!vol.valid(d, y, x)) continue;
          const double e = std::exp(cfg.beta * (vol.at(d, y, x) - best_cost));
          z += e;
          acc += e * d;
        }
        disp = acc / z;
      }
      out.at(y, x) = disp * cfg.disparity_scale;
      out.set_valid(y, x, true);
    }
  });
  return out;
}

DisparityMap upsample_disparity(const DisparityMap& disp, int stride, int width, int height) {
  if (stride < 1) throw Error("stride must be >= 1");
  if (disp.width() == 0 || disp.height() == 0) throw Error("cannot upsample an empty disparity map");
  DisparityMap out(width, height, 0.0, false);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(y / stride, disp.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(x / stride, disp.width() - 1);
      out.at(y, x) = disp.at(sy, sx);
      out.set_valid(y, x, disp.valid(sy, sx));
    }
  }
  return out;
}

namespace {

void check_same_size(const DisparityMap& a, const DisparityMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw Error("disparity maps differ in size");
}

std::size_t joint_support(const DisparityMap& pred, const DisparityMap& gt) {
  std::size_t n = 0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) n += (pred.valid(y, x) && gt.valid(y, x)) ? 1 : 0;
  }
  if (n == 0) throw Error("empty loss support");
  return n;
}

}  // namespace

double smooth_l1_loss(const DisparityMap& pred, const DisparityMap& gt) {
  check_same_size(pred, gt);
  const std::size_t n = joint_support(pred, gt);
  double sum = 0.0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!pred.valid(y, x) || !gt.valid(y, x)) continue;
      const double e = std::abs(pred.at(y, x) - gt.at(y, x));
      sum += e < 1.0 ? 0.5 * e * e : e - 0.5;
    }
  }
  return sum / static_cast<double>(n);
}

Planar smooth_l1_grad(const DisparityMap& pred, const DisparityMap& gt) {
  check_same_size(pred, gt);
  const double inv_n = 1.0 / static_cast<double>(joint_support(pred, gt));
  Planar grad(1, pred.height(), pred.width());
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (!pred.valid(y, x) || !gt.valid(y, x)) continue;
      const double e = pred.at(y, x) - gt.at(y, x);
      const double g = std::abs(e) < 1.0 ? e : (e > 0.0 ? 1.0 : -1.0);
      grad.at(0, y, x) = g * inv_n;
    }
  }
  return grad;
}

double bce_loss(const OcclusionMask& pred, const OcclusionMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) throw Error("occlusion masks differ in size");
  const auto p = pred.values();
  const auto g = gt.values();
  if (p.empty()) throw Error("empty loss support");
  constexpr double kClamp = 1e-7;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kClamp, 1.0 - kClamp);
    sum -= g[i] * std::log(q) + (1.0 - g[i]) * std::log(1.0 - q);
  }
  return sum / static_cast<double>(p.size());
}

}  // namespace stereoadapt
