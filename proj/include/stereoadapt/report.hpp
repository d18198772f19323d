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

#include "stereoadapt/costvolume.hpp"
#include "stereoadapt/metrics.hpp"
#include "stereoadapt/reconstruction.hpp"

namespace stereoadapt {

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

/// `bin_lo,bin_hi,proportion`, one row per bin, then
/// `# underflow=U,overflow=O,in_range=N`.
std::string histogram_csv(const Histogram& h);
std::string histogram_json(const Histogram& h);

/// `metric,value` rows: d1, bad_1, bad_2, bad_3, gd.
std::string metrics_csv(const MetricReport& r);
/// `k,ard,count`.
std::string ard_csv(const ArdResult& ard);
/// `class,mr`.
std::string mr_csv(const std::map<std::string, double>& mr);
/// Everything above as a single JSON object.
std::string metrics_json(const MetricReport& r);

/// `name=value` lines for the five parts, the four weights, alpha and total.
std::string loss_lines(const LossBreakdown& b);
std::string loss_json(const LossBreakdown& b);

}  // namespace stereoadapt
