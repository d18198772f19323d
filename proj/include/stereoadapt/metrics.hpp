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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "stereoadapt/core_types.hpp"

namespace stereoadapt {

/// Depth range [center - scope, center + scope] in metres.
struct DepthBin {
  double center = 0.0;
  double scope = 0.0;
};

/// Centres 5, 10, ..., 80 m with scope 2.5 m.
std::vector<DepthBin> default_depth_bins();

/// vehicle, human, ground, construction, nature, others (ids 0..5).
std::vector<std::string> default_class_names();

struct EvalConfig {
  double pixel_threshold = 3.0;
  /// Focal length (px) times baseline (m); depth = fB / disparity.
  double focal_times_baseline = 721.5377 * 0.5327;
  std::vector<DepthBin> depth_bins = default_depth_bins();
  std::vector<std::string> class_names = default_class_names();

  void validate() const;
};

/// Integer class id per pixel; negative ids are unlabelled.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, int fill = -1)
      : width_(width), height_(height), ids_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int& at(int y, int x) { return ids_[static_cast<std::size_t>(y) * width_ + x]; }
  int at(int y, int x) const { return ids_[static_cast<std::size_t>(y) * width_ + x]; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<int> ids_;
};

/// Pixel counts over the joint valid support of pred and gt.
struct ThresholdCounts {
  std::size_t support = 0;
  std::size_t above = 0;  // |pred - gt| > threshold
};

ThresholdCounts threshold_counts(const DisparityMap& pred, const DisparityMap& gt, double threshold);

/// Percentage of jointly valid pixels with |pred - gt| > threshold. Throws on
/// an empty support.
double d1_error(const DisparityMap& pred, const DisparityMap& gt, double threshold);

struct ArdPoint {
  double k = 0.0;
  double ard = 0.0;  // percent; 0 for empty bins
  std::size_t count = 0;
};

struct ArdResult {
  std::vector<ArdPoint> curve;
  double gd = 0.0;
};

/// Per depth bin, the mean of |d_p - d_g| / d_g (in percent) over pixels whose
/// ground-truth depth fB / d_g falls inside the bin. GD is the unweighted mean
/// over non-empty bins. Throws when every bin is empty.
ArdResult ard_curve(const DisparityMap& pred, const DisparityMap& gt, const EvalConfig& cfg);

/// Per class, the percentage of jointly valid pixels with |pred - gt| <=
/// threshold. Classes without valid pixels are omitted; ids outside
/// class_names are reported as "class_<id>".
std::map<std::string, double> matching_rate(const DisparityMap& pred, const DisparityMap& gt,
                                            const LabelMap& labels, double threshold,
                                            const std::vector<std::string>& class_names = default_class_names());

struct MetricReport {
  double d1 = 0.0;
  std::map<double, double> bad;  // threshold -> percent
  ArdResult ard;
  std::map<std::string, double> mr_per_class;
};

/// Full report: D1 at cfg.pixel_threshold, bad-k at 1/2/3 px, the ARD curve
/// (when any bin is populated) and MR (when labels are given).
MetricReport evaluate(const DisparityMap& pred, const DisparityMap& gt, const LabelMap* labels,
                      const EvalConfig& cfg);

}  // namespace stereoadapt
