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

#include "stereoadapt/metrics.hpp"

#include <cmath>

namespace stereoadapt {

std::vector<DepthBin> default_depth_bins() {
  std::vector<DepthBin> bins;
  for (int k = 5; k <= 80; k += 5) bins.push_back({static_cast<double>(k), 2.5});
  return bins;
}

std::vector<std::string> default_class_names() {
  return {"vehicle", "human", "ground", "construction", "nature", "others"};
}

void EvalConfig::validate() const {
  if (!(pixel_threshold > 0.0)) throw Error("pixel threshold must be positive");
  if (!(focal_times_baseline > 0.0)) throw Error("focal_times_baseline must be positive");
  if (depth_bins.empty()) throw Error("at least one depth bin is required");
}

namespace {

void check_sizes(const DisparityMap& pred, const DisparityMap& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) throw Error("disparity maps differ in size");
}

bool jointly_valid(const DisparityMap& pred, const DisparityMap& gt, int y, int x) {
  return pred.valid(y, x) && gt.valid(y, x);
}

}  // namespace

ThresholdCounts threshold_counts(const DisparityMap& pred, const DisparityMap& gt, double threshold) {
  check_sizes(pred, gt);
  ThresholdCounts counts;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!jointly_valid(pred, gt, y, x)) continue;
      ++counts.support;
      if (std::abs(pred.at(y, x) - gt.at(y, x)) > threshold) ++counts.above;
    }
  }
  return counts;
}

double d1_error(const DisparityMap& pred, const DisparityMap& gt, double threshold) {
  const ThresholdCounts c = threshold_counts(pred, gt, threshold);
  if (c.support == 0) throw Error("empty evaluation support");
  return 100.0 * static_cast<double>(c.above) / static_cast<double>(c.support);
}

ArdResult ard_curve(const DisparityMap& pred, const DisparityMap& gt, const EvalConfig& cfg) {
  check_sizes(pred, gt);
  cfg.validate();
  ArdResult out;
  std::vector<double> sums(cfg.depth_bins.size(), 0.0);
  out.curve.resize(cfg.depth_bins.size());
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!jointly_valid(pred, gt, y, x)) continue;
      const double dg = gt.at(y, x);
      if (!(dg > 0.0)) continue;
      const double depth = cfg.focal_times_baseline / dg;
      const double rel = std::abs(pred.at(y, x) - dg) / dg;
      for (std::size_t b = 0; b < cfg.depth_bins.size(); ++b) {
        const DepthBin& bin = cfg.depth_bins[b];
        if (depth >= bin.center - bin.scope && depth <= bin.center + bin.scope) {
          sums[b] += rel;
          ++out.curve[b].count;
        }
      }
    }
  }
  double gd_sum = 0.0;
  std::size_t populated = 0;
  for (std::size_t b = 0; b < out.curve.size(); ++b) {
    ArdPoint& p = out.curve[b];
    p.k = cfg.depth_bins[b].center;
    if (p.count == 0) continue;
    p.ard = 100.0 * sums[b] / static_cast<double>(p.count);
    gd_sum += p.ard;
    ++populated;
  }
  if (populated == 0) throw Error("every depth bin is empty");
  out.gd = gd_sum / static_cast<double>(populated);
  return out;
}

std::map<std::string, double> matching_rate(const DisparityMap& pred, const DisparityMap& gt,
                                            const LabelMap& labels, double threshold,
                                            const std::vector<std::string>& class_names) {
  check_sizes(pred, gt);
  if (labels.width() != gt.width() || labels.height() != gt.height()) throw Error("label map differs in size");
  std::map<int, std::pair<std::size_t, std::size_t>> tally;  // id -> (support, matched)
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const int id = labels.at(y, x);
      if (id < 0 || !jointly_valid(pred, gt, y, x)) continue;
      auto& [support, matched] = tally[id];
      ++support;
      if (std::abs(pred.at(y, x) - gt.at(y, x)) <= threshold) ++matched;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [id, t] : tally) {
    const std::string name =
        static_cast<std::size_t>(id) < class_names.size() ? class_names[id] : "class_" + std::to_string(id);
    out[name] = 100.0 * static_cast<double>(t.second) / static_cast<double>(t.first);
  }
  return out;
}

MetricReport evaluate(const DisparityMap& pred, const DisparityMap& gt, const LabelMap* labels,
                      const EvalConfig& cfg) {
  cfg.validate();
  MetricReport report;
  report.d1 = d1_error(pred, gt, cfg.pixel_threshold);
  for (double t : {1.0, 2.0, 3.0}) report.bad[t] = d1_error(pred, gt, t);
  try {
    report.ard = ard_curve(pred, gt, cfg);
  } catch (const Error&) {
    // No pixel in range: all bins empty, GD 0.
    report.ard = {};
    for (const DepthBin& bin : cfg.depth_bins) report.ard.curve.push_back({bin.center, 0.0, 0});
  }
  if (labels != nullptr) {
    report.mr_per_class = matching_rate(pred, gt, *labels, cfg.pixel_threshold, cfg.class_names);
  }
  return report;
}

}  // namespace stereoadapt
