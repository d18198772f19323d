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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "stereoadapt/color.hpp"
#include "stereoadapt/costnorm.hpp"
#include "stereoadapt/costvolume.hpp"
#include "stereoadapt/dataio.hpp"
#include "stereoadapt/metrics.hpp"
#include "stereoadapt/parallel.hpp"
#include "stereoadapt/pipeline.hpp"
#include "stereoadapt/reconstruction.hpp"
#include "stereoadapt/report.hpp"

namespace fs = std::filesystem;
using namespace stereoadapt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first failing message is kept for the summary line.
struct Verdict {
  bool pass = true;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) { return format_number(v); }

Image random_image(std::mt19937_64& rng, int w, int h, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Image img(w, h);
  for (double& v : img.data()) v = u(rng);
  return img;
}

fs::path scratch_dir(const std::string& tag) {
  std::random_device rd;
  const fs::path p = fs::temp_directory_path() / ("stereoadapt_accept_" + tag + "_" + std::to_string(rd()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

constexpr double kNormRounding = 4.0 * std::numeric_limits<double>::epsilon();

Outcome a1_cost_norm() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> cdist(1, 16), sdist(1, 32);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Verdict v;
  double worst_norm = 1.0, worst_scale = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    FeatureMap f(cdist(rng), sdist(rng), sdist(rng));
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        double n2 = 0.0;
        do {
          n2 = 0.0;
          for (int c = 0; c < f.channels(); ++c) {
            f.at(c, y, x) = u(rng);
            n2 += f.at(c, y, x) * f.at(c, y, x);
          }
        } while (std::sqrt(n2) < 1e-3);
      }
    }
    FeatureMap big = f;
    for (double& x : big.data()) x *= 1000.0;
    const auto [out, unused] = cost_normalize(f, f);
    const auto [out_big, unused_big] = cost_normalize(big, big);
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        double n2 = 0.0;
        for (int c = 0; c < f.channels(); ++c) n2 += out.at(c, y, x) * out.at(c, y, x);
        worst_norm = std::min(worst_norm, std::sqrt(n2));
        // Upper end allows for the rounding of the stored doubles themselves.
        v.expect(std::sqrt(n2) >= 1.0 - 1e-6 && std::sqrt(n2) <= 1.0 + kNormRounding, "pixel norm out of [1-1e-6, 1]");
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) worst_scale = std::max(worst_scale, std::abs(out.data()[i] - out_big.data()[i]));
  }
  v.expect(worst_scale <= 1e-6, "scale invariance above 1e-6");
  const double secs = seconds_since(t0);
  v.expect(secs < 10.0, "runtime over 10 s");
  return {v.pass, "min norm " + num(worst_norm) + ", max |f(x) - f(1000x)| " + num(worst_scale) + ", " + num(secs) +
                      " s" + (v.pass ? "" : "; " + v.first_failure)};
}

Outcome a2_color_transfer() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> size(8, 48);
  Verdict v;
  double worst_stat = 0.0, worst_identity = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ColorSpace space = trial % 2 ? ColorSpace::kCieLab : ColorSpace::kLogLab;
    const Image src = random_image(rng, size(rng), size(rng));
    const Image tgt = random_image(rng, size(rng), size(rng), 0.1, 0.9);
    TransferState st;
    st.space = space;
    st = momentum_update(st, channel_stats(rgb_to_working(tgt, space)));
    const ColorRaster w = rgb_to_working(src, space);
    const ColorStats got = channel_stats(apply_color_map(w, fit_color_map(channel_stats(w), st)));
    for (int c = 0; c < 3; ++c) {
      worst_stat = std::max({worst_stat, std::abs(got.mean[c] - st.running_mean[c]),
                             std::abs(got.std[c] - st.running_std[c])});
    }

    ProgressiveColorTransfer self(1.0, space);
    const TransferredPair out = self.step(src, src, src);
    for (std::size_t i = 0; i < src.size(); ++i) {
      worst_identity = std::max({worst_identity, std::abs(out.left.data()[i] - src.data()[i]),
                                 std::abs(out.right.data()[i] - src.data()[i])});
    }
  }
  v.expect(worst_stat <= 1e-3, "transferred statistics off by more than 1e-3");
  v.expect(worst_identity <= 2.0 / 255.0, "self-transfer moved a pixel by more than 2/255");
  const double secs = seconds_since(t0);
  v.expect(secs < 30.0, "runtime over 30 s");
  return {v.pass, "max stat error " + num(worst_stat) + ", max self-transfer change " + num(worst_identity * 255.0) +
                      "/255, " + num(secs) + " s" + (v.pass ? "" : "; " + v.first_failure)};
}

Outcome a3_occlusion() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> wdist(1, 64);
  std::size_t mismatches = 0, occluded = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int w = wdist(rng);
    std::uniform_int_distribution<int> ddist(0, std::max(1, w / 2));
    DisparityMap d(w, 1);
    for (int x = 0; x < w; ++x) d.at(0, x) = ddist(rng);
    const OcclusionMask got = occlusion_oracle(d);
    for (int x = 0; x < w; ++x) {
      bool hit = false;
      for (int x2 = x + 1; x2 < w; ++x2) hit = hit || (x2 - d.at(0, x2) == x - d.at(0, x));
      occluded += hit;
      mismatches += (got.at(0, x) == 1.0) != hit;
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = mismatches == 0 && secs < 5.0;
  return {pass, std::to_string(mismatches) + " mismatches (" + std::to_string(occluded) + " occluded pixels), " +
                    num(secs) + " s"};
}

Outcome a4_loss_stack() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(404);
  Verdict v;
  const Image l = random_image(rng, 48, 32);
  const double self_loss = reconstruction_loss(l, l, OcclusionMask(48, 32, OcclusionKind::kSoft), PixelMask(48, 32, true), 0.85);
  v.expect(self_loss <= 1e-6, "reconstruction_loss(l, l) above 1e-6");
  double ssim_dev = 0.0;
  for (double s : ssim3x3(l, l).data()) ssim_dev = std::max(ssim_dev, std::abs(s - 1.0));
  v.expect(ssim_dev <= 1e-9, "self-SSIM off by more than 1e-9");
  const double total = total_loss(LossParts{1, 1, 1, 1, 1}, LossWeights{}).total;
  v.expect(total == 2.5, "total of unit parts is not 2.5");

  const SyntheticPair s = synth_rds(96, 64, 6, std::nullopt, 404);
  DisparityMap disp = s.disparity;
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 96; ++x) disp.at(y, x) += frac(rng);
  OcclusionMask occ(96, 64, OcclusionKind::kSoft);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 96; ++x) occ.at(y, x) = s.occlusion.at(y, x);
  const GradCheckResult g = check_disparity_gradient(s.left, s.right, disp, occ, 0.85, 200, 1e-3, 7);
  v.expect(g.probes >= 100, "fewer than 100 smooth probes");
  v.expect(g.max_rel_error <= 1e-3, "gradient relative error above 1e-3");
  return {v.pass, "self loss " + num(self_loss) + ", SSIM dev " + num(ssim_dev) + ", total " + num(total) + ", grad " +
                      std::to_string(g.probes) + " probes max rel " + num(g.max_rel_error) + ", " +
                      num(seconds_since(t0)) + " s" + (v.pass ? "" : "; " + v.first_failure)};
}

Outcome a5_end_to_end() {
  set_thread_limit(1);
  Verdict v;
  double worst_wta = 0.0, worst_soft = 0.0, slowest = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SyntheticPair s = synth_rds(320, 240, 10, std::nullopt, seed);
    DisparityMap gt = s.disparity;
    for (int y = 0; y < 240; ++y)
      for (int x = 0; x < 320; ++x)
        if (s.occlusion.at(y, x) != 0.0) gt.set_valid(y, x, false);

    PipelineConfig cfg;
    cfg.d_max = 64;
    cfg.regression.mode = RegressionMode::kWta;
    cfg.regression.aggregation_radius = 2;
    auto t0 = std::chrono::steady_clock::now();
    const double wta = d1_error(estimate_disparity(s.left, s.right, cfg).disparity, gt, 3.0);
    slowest = std::max(slowest, seconds_since(t0));

    cfg.regression.mode = RegressionMode::kSoftArgmin;
    cfg.regression.beta = 1000.0;
    t0 = std::chrono::steady_clock::now();
    const double soft = d1_error(estimate_disparity(s.left, s.right, cfg).disparity, gt, 3.0);
    slowest = std::max(slowest, seconds_since(t0));

    worst_wta = std::max(worst_wta, wta);
    worst_soft = std::max(worst_soft, soft);
  }
  set_thread_limit(0);
  v.expect(worst_wta <= 2.0, "WTA D1 above 2%");
  v.expect(worst_soft <= 3.0, "soft-argmin D1 above 3%");
  v.expect(slowest < 10.0, "single-threaded run over 10 s");
  return {v.pass, "D1 wta " + num(worst_wta) + "%, soft-argmin " + num(worst_soft) + "% (worst of 3 seeds), slowest run " +
                      num(slowest) + " s" + (v.pass ? "" : "; " + v.first_failure)};
}

Outcome a6_metrics() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> disp(1.0, 100.0), err(-8.0, 8.0), u(0.0, 1.0);
  Verdict v;
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 40, h = 20;
    DisparityMap pred(w, h), gt(w, h);
    LabelMap all(w, h, 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        gt.at(y, x) = disp(rng);
        pred.at(y, x) = gt.at(y, x) + (u(rng) < 0.6 ? err(rng) : 0.0);
        if (u(rng) < 0.1) gt.set_valid(y, x, false);
      }
    }
    const double t = 1.0 + trial % 3;
    const ThresholdCounts c = threshold_counts(pred, gt, t);
    std::size_t within = 0, support = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!gt.valid(y, x)) continue;
        ++support;
        within += std::abs(pred.at(y, x) - gt.at(y, x)) <= t;
      }
    }
    v.expect(c.support == support && c.above + within == support, "D1 / MR counts not complementary");
    const double mr = matching_rate(pred, gt, all, t).at(default_class_names()[0]);
    v.expect(std::abs(d1_error(pred, gt, t) + mr - 100.0) <= 1e-12, "D1 + MR differs from 100");

    const ArdResult ard = ard_curve(pred, gt, EvalConfig{});
    double sum = 0.0;
    int populated = 0;
    for (const ArdPoint& p : ard.curve) {
      if (p.count == 0) continue;
      sum += p.ard;
      ++populated;
    }
    v.expect(ard.gd == sum / populated, "GD is not the mean of non-empty ARD bins");
  }

  // Depth strata at every bin centre, uniform 10% relative error.
  const EvalConfig cfg;
  DisparityMap gt(16, 8), pred(16, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 16; ++x) {
      gt.at(y, x) = cfg.focal_times_baseline / (5.0 * (x + 1));
      pred.at(y, x) = 1.1 * gt.at(y, x);
    }
  }
  const ArdResult strata = ard_curve(pred, gt, cfg);
  v.expect(std::abs(strata.gd - 10.0) <= 1e-9, "GD of 10% error is not 10");
  return {v.pass, "100 instances complementary, GD recomputed exactly, strata GD " + num(strata.gd) +
                      (v.pass ? "" : "; " + v.first_failure)};
}

Outcome a7_codecs() {
  const fs::path dir = scratch_dir("codecs");
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> size(1, 40), raw(0, 65535), bits(0, 0x7f7fffff);
  Verdict v;
  for (int trial = 0; trial < 100; ++trial) {
    PfmRaster r;
    r.width = size(rng);
    r.height = size(rng);
    r.channels = trial % 4 == 0 ? 3 : 1;
    r.little_endian = trial % 2 == 0;
    r.data.resize(static_cast<std::size_t>(r.width) * r.height * r.channels);
    for (float& f : r.data) f = std::bit_cast<float>(static_cast<std::uint32_t>(bits(rng)) | (raw(rng) & 1u ? 0x80000000u : 0u));
    const fs::path p = dir / "r.pfm";
    write_pfm(p, r);
    const std::string first = slurp(p);
    const PfmRaster back = read_pfm(p);
    v.expect(back.width == r.width && back.height == r.height && back.channels == r.channels &&
                 std::memcmp(back.data.data(), r.data.data(), r.data.size() * sizeof(float)) == 0,
             "PFM payload changed on round trip");
    write_pfm(p, back);
    v.expect(slurp(p) == first, "PFM file changed on rewrite");
    // Sign of the scale line encodes the byte order.
    const std::size_t l2 = first.find('\n', first.find('\n') + 1) + 1;
    const bool negative = first[l2] == '-';
    v.expect(negative == r.little_endian, "scale sign does not match byte order");

    Png16Raster q{size(rng), size(rng), {}};
    for (int i = 0; i < q.width * q.height; ++i) q.data.push_back(static_cast<std::uint16_t>(raw(rng)));
    const fs::path pq = dir / "q.png";
    write_png16(pq, q);
    const std::string qfirst = slurp(pq);
    const Png16Raster qback = read_png16(pq);
    v.expect(qback.width == q.width && qback.height == q.height && qback.data == q.data, "PNG16 samples changed");
    write_png16(pq, qback);
    v.expect(slurp(pq) == qfirst, "PNG16 file changed on rewrite");
  }

  // Reading: the same samples stored both ways decode identically.
  const std::array<float, 2> samples{1.5f, -2.25f};
  std::string le = "Pf\n2 1\n-1.0\n", be = "Pf\n2 1\n1.0\n";
  for (float f : samples) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) le.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
    for (int i = 3; i >= 0; --i) be.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
  }
  const PfmRaster dle = decode_pfm(le), dbe = decode_pfm(be);
  v.expect(dle.little_endian && !dbe.little_endian, "endianness flag not decoded from scale sign");
  v.expect(dle.data == dbe.data && dle.at(0, 1) == -2.25f, "byte order not honoured on read");
  v.expect(encode_pfm(dle) == le && encode_pfm(dbe) == be, "byte order not honoured on write");
  fs::remove_all(dir);
  return {v.pass, "100 PFM + 100 PNG16 rasters bitwise, endianness both directions" +
                      (v.pass ? std::string() : "; " + v.first_failure)};
}

Outcome a8_histogram(const std::string& cli) {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> val(-4.0, 34.0), u(0.0, 1.0);
  Verdict v;
  double worst_sum = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CostVolume vol(6, 8, 10);
    for (double& x : vol.data()) x = val(rng);
    for (int d = 0; d < 6; ++d)
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 10; ++x)
          if (u(rng) < 0.1) vol.set_valid(d, y, x, false);
    std::array<std::size_t, 30> counts{};
    std::size_t in = 0;
    for (int d = 0; d < 6; ++d) {
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 10; ++x) {
          const double c = vol.at(d, y, x);
          if (!vol.valid(d, y, x) || c < 0.0 || c >= 30.0) continue;
          ++counts[static_cast<std::size_t>(std::floor(c))];
          ++in;
        }
      }
    }
    const Histogram h = cost_histogram(vol);
    double sum = 0.0;
    for (int b = 0; b < 30; ++b) {
      sum += h.proportions[b];
      v.expect(h.proportions[b] == static_cast<double>(counts[b]) / static_cast<double>(in), "proportion differs from counting oracle");
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  v.expect(worst_sum <= 1e-9, "proportions do not sum to 1");

  // End to end through the command-line tool.
  const fs::path dir = scratch_dir("hist");
  const SyntheticPair s = synth_rds(128, 64, 6, std::nullopt, 8);
  write_image(dir / "l.png", s.left);
  write_image(dir / "r.png", s.right);
  const std::string cmd = "\"" + cli + "\" cost-hist --left \"" + (dir / "l.png").string() + "\" --right \"" +
                          (dir / "r.png").string() + "\" --out \"" + (dir / "h.csv").string() + "\"";
  v.expect(std::system(cmd.c_str()) == 0, "cost-hist command failed");
  std::istringstream csv(slurp(dir / "h.csv"));
  std::string line;
  std::getline(csv, line);
  v.expect(line == "bin_lo,bin_hi,proportion", "unexpected CSV header");
  int rows = 0;
  double csv_sum = 0.0;
  while (std::getline(csv, line)) {
    if (line.starts_with("#")) continue;
    double lo = 0, hi = 0, p = 0;
    v.expect(std::sscanf(line.c_str(), "%lf,%lf,%lf", &lo, &hi, &p) == 3, "unparsable CSV row");
    v.expect(lo == rows && hi == rows + 1, "bin edges are not unit steps over [0,30)");
    csv_sum += p;
    ++rows;
  }
  v.expect(rows == 30, "CSV does not have 30 bins");
  v.expect(std::abs(csv_sum - 1.0) <= 1e-9, "CSV proportions do not sum to 1");
  fs::remove_all(dir);
  return {v.pass, "50 volumes match counting oracle, max |sum - 1| " + num(worst_sum) + ", CLI CSV rows " +
                      std::to_string(rows) + (v.pass ? "" : "; " + v.first_failure)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "stereoadapt";
  const std::array<std::pair<const char*, std::function<Outcome()>>, 8> criteria{{
      {"A1 cost-norm invariants", a1_cost_norm},
      {"A2 colour-transfer statistics", a2_color_transfer},
      {"A3 occlusion oracle equivalence", a3_occlusion},
      {"A4 loss stack", a4_loss_stack},
      {"A5 end-to-end random-dot stereo", a5_end_to_end},
      {"A6 metrics", a6_metrics},
      {"A7 codecs", a7_codecs},
      {"A8 cost histogram", [&] { return a8_histogram(cli); }},
  }};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
