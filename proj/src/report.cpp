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

#include "stereoadapt/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace stereoadapt {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,proportion\n";
  for (int b = 0; b < kHistogramBins; ++b) {
    out << format_number(h.bin_edges[b]) << ',' << format_number(h.bin_edges[b + 1]) << ','
        << format_number(h.proportions[b]) << '\n';
  }
  out << "# underflow=" << h.underflow << ",overflow=" << h.overflow << ",in_range=" << h.in_range << '\n';
  return out.str();
}

std::string histogram_json(const Histogram& h) {
  json j;
  j["bin_edges"] = h.bin_edges;
  j["proportions"] = h.proportions;
  j["counts"] = h.counts;
  j["underflow"] = h.underflow;
  j["overflow"] = h.overflow;
  j["in_range"] = h.in_range;
  return j.dump(2) + "\n";
}

std::string metrics_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "d1," << format_number(r.d1) << '\n';
  for (const auto& [t, v] : r.bad) out << "bad_" << format_number(t) << ',' << format_number(v) << '\n';
  out << "gd," << format_number(r.ard.gd) << '\n';
  return out.str();
}

std::string ard_csv(const ArdResult& ard) {
  std::ostringstream out;
  out << "k,ard,count\n";
  for (const ArdPoint& p : ard.curve) out << format_number(p.k) << ',' << format_number(p.ard) << ',' << p.count << '\n';
  return out.str();
}

std::string mr_csv(const std::map<std::string, double>& mr) {
  std::ostringstream out;
  out << "class,mr\n";
  for (const auto& [name, v] : mr) out << name << ',' << format_number(v) << '\n';
  return out.str();
}

std::string metrics_json(const MetricReport& r) {
  json j;
  j["d1"] = r.d1;
  for (const auto& [t, v] : r.bad) j["bad_" + format_number(t)] = v;
  j["gd"] = r.ard.gd;
  j["ard"] = json::array();
  for (const ArdPoint& p : r.ard.curve) j["ard"].push_back({{"k", p.k}, {"ard", p.ard}, {"count", p.count}});
  j["mr"] = json::object();
  for (const auto& [name, v] : r.mr_per_class) j["mr"][name] = v;
  return j.dump(2) + "\n";
}

std::string loss_lines(const LossBreakdown& b) {
  std::ostringstream out;
  out << "l_s_main=" << format_number(b.parts.l_s_main) << '\n'
      << "l_s_occ=" << format_number(b.parts.l_s_occ) << '\n'
      << "l_t_ar=" << format_number(b.parts.l_t_ar) << '\n'
      << "l_t_occ=" << format_number(b.parts.l_t_occ) << '\n'
      << "l_t_sm=" << format_number(b.parts.l_t_sm) << '\n'
      << "w_s_occ=" << format_number(b.weights.w_s_occ) << '\n'
      << "w_t_ar=" << format_number(b.weights.w_t_ar) << '\n'
      << "w_t_occ=" << format_number(b.weights.w_t_occ) << '\n'
      << "w_t_sm=" << format_number(b.weights.w_t_sm) << '\n'
      << "alpha=" << format_number(b.weights.alpha) << '\n'
      << "total=" << format_number(b.total) << '\n';
  return out.str();
}

std::string loss_json(const LossBreakdown& b) {
  const json j = {
      {"l_s_main", b.parts.l_s_main}, {"l_s_occ", b.parts.l_s_occ}, {"l_t_ar", b.parts.l_t_ar},
      {"l_t_occ", b.parts.l_t_occ},   {"l_t_sm", b.parts.l_t_sm},   {"w_s_occ", b.weights.w_s_occ},
      {"w_t_ar", b.weights.w_t_ar},   {"w_t_occ", b.weights.w_t_occ}, {"w_t_sm", b.weights.w_t_sm},
      {"alpha", b.weights.alpha},     {"total", b.total},
  };
  return j.dump(2) + "\n";
}

}  // namespace stereoadapt
