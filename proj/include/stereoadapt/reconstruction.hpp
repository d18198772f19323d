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

#include <cstdint>

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

struct LossWeights {
  double w_s_occ = 0.2;
  double w_t_ar = 1.0;
  double w_t_occ = 0.2;
  double w_t_sm = 0.1;
  /// SSIM / L1 balance of the appearance term.
  double alpha = 0.85;

  void validate() const;
};

/// The five unweighted loss terms.
struct LossParts {
  double l_s_main = 0.0;  // source smooth-L1 disparity loss
  double l_s_occ = 0.0;   // source occlusion BCE
  double l_t_ar = 0.0;    // target appearance reconstruction
  double l_t_occ = 0.0;   // target occlusion regulariser
  double l_t_sm = 0.0;    // target edge-aware smoothness
};

struct LossBreakdown {
  LossParts parts;
  LossWeights weights;
  double total = 0.0;
};

struct WarpResult {
  Image warped;
  PixelMask valid;
};

/// warped(y, x) = bilinear_sample(right, x - disp(y, x), y). Pixels whose
/// sample leaves the frame or whose disparity is invalid are zero and invalid.
WarpResult warp_right_to_left(const Image& right, const DisparityMap& disp);

enum class OcclusionScan {
  kForward,    // collisions with pixels x2 > x only
  kSymmetric,  // collisions with any other pixel of the row
};

/// Geometric occlusion from a left-view disparity map. Target columns
/// x - d(x, y) are rounded to the nearest integer; a pixel is occluded when
/// another valid pixel of its row (x2 > x for kForward) lands on the same
/// column. Invalid pixels are 0 and never occlude others.
OcclusionMask occlusion_oracle(const DisparityMap& gt, OcclusionScan scan = OcclusionScan::kForward);

inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

/// Per-pixel SSIM from 3x3 box statistics (reflect padding), averaged over
/// the three channels. Returns a 1 x H x W raster.
Planar ssim3x3(const Image& a, const Image& b);

/// Occlusion-aware appearance loss. Both images are multiplied by (1 - occ);
/// per pixel alpha * (1 - SSIM) / 2 + (1 - alpha) * mean_c |l - warped|,
/// averaged over warp-valid pixels. Throws "empty loss support" when no pixel
/// is valid.
double reconstruction_loss(const Image& left, const Image& warped, const OcclusionMask& occ,
                           const PixelMask& warp_valid, double alpha);

/// Mean occlusion value (L1 norm divided by pixel count).
double occlusion_regularizer(const OcclusionMask& occ);

/// Edge-aware smoothness: mean over x-pairs of |dx d| exp(-|dx I|) plus the
/// same over y-pairs. Forward differences; |dI| is the channel mean of the
/// absolute differences; only pairs with both disparities valid count.
double smoothness_loss(const DisparityMap& disp, const Image& img);

LossBreakdown total_loss(const LossParts& parts, const LossWeights& weights = {});

/// Reconstruction + smoothness objective for a target pair:
///   reconstruction_loss(left, warp(right, disp), ...) + smoothness_loss(disp, left).
double target_objective(const Image& left, const Image& right, const DisparityMap& disp,
                        const OcclusionMask& occ, double alpha);

struct DisparityGradient {
  /// d(target_objective) / d(disp), 1 x H x W.
  Planar grad;
  /// False where the objective is not differentiable in disp(y, x): invalid
  /// disparities, warps leaving the frame, sample points on a bilinear cell
  /// boundary.
  PixelMask differentiable;
};

DisparityGradient reconstruction_grad_wrt_disp(const Image& left, const Image& right,
                                               const DisparityMap& disp, const OcclusionMask& occ,
                                               double alpha);

struct GradCheckResult {
  std::size_t probes = 0;
  double max_rel_error = 0.0;
  double mean_rel_error = 0.0;
};

/// Compares the analytic gradient with central finite differences of
/// target_objective at randomly drawn probe pixels. Probes are restricted to
/// points where every kink of the objective is further than the step away.
/// Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult check_disparity_gradient(const Image& left, const Image& right, const DisparityMap& disp,
                                         const OcclusionMask& occ, double alpha, std::size_t probes,
                                         double step, std::uint64_t seed);

}  // namespace stereoadapt
