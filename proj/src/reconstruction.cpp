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

#include "stereoadapt/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "stereoadapt/parallel.hpp"

namespace stereoadapt {

void LossWeights::validate() const {
  if (w_s_occ < 0.0 || w_t_ar < 0.0 || w_t_occ < 0.0 || w_t_sm < 0.0) throw Error("loss weights must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0,1]");
}

namespace {

void check_image_pair(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) throw Error("images differ in size");
}

void check_disp_size(const DisparityMap& d, const Image& img) {
  if (d.width() != img.width() || d.height() != img.height()) throw Error("disparity and image differ in size");
}

// Reflect padding without edge repetition: -1 -> 1, n -> n - 2.
int reflect(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

// 3x3 box statistics of two single-channel planes.
struct Moments {
  double mu_a, mu_b, ea2, eb2, eab;
};

Moments moments_at(std::span<const double> a, std::span<const double> b, int w, int h, int y, int x) {
  Moments m{0, 0, 0, 0, 0};
  for (int dy = -1; dy <= 1; ++dy) {
    const int yy = reflect(y + dy, h);
    for (int dx = -1; dx <= 1; ++dx) {
      const std::size_t k = static_cast<std::size_t>(yy) * w + reflect(x + dx, w);
      m.mu_a += a[k];
      m.mu_b += b[k];
      m.ea2 += a[k] * a[k];
      m.eb2 += b[k] * b[k];
      m.eab += a[k] * b[k];
    }
  }
  constexpr double inv9 = 1.0 / 9.0;
  m.mu_a *= inv9;
  m.mu_b *= inv9;
  m.ea2 *= inv9;
  m.eb2 *= inv9;
  m.eab *= inv9;
  return m;
}

struct SsimTerms {
  double n1, n2, d1, d2, value;
};

SsimTerms ssim_terms(const Moments& m) {
  const double var_a = m.ea2 - m.mu_a * m.mu_a;
  const double var_b = m.eb2 - m.mu_b * m.mu_b;
  const double cov = m.eab - m.mu_a * m.mu_b;
  SsimTerms t;
  t.n1 = 2.0 * m.mu_a * m.mu_b + kSsimC1;
  t.n2 = 2.0 * cov + kSsimC2;
  t.d1 = m.mu_a * m.mu_a + m.mu_b * m.mu_b + kSsimC1;
  t.d2 = var_a + var_b + kSsimC2;
  t.value = (t.n1 * t.n2) / (t.d1 * t.d2);
  return t;
}

Image masked(const Image& img, const OcclusionMask& occ) {
  Image out = img;
  for (int c = 0; c < 3; ++c) {
    auto plane = out.plane(c);
    const auto o = occ.values();
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] *= 1.0 - o[i];
  }
  return out;
}

void check_occ(const OcclusionMask& occ, const Image& img) {
  if (occ.width() != img.width() || occ.height() != img.height()) throw Error("occlusion mask and image differ in size");
}

double mean_abs_step(const Image& img, int y0, int x0, int y1, int x1) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += std::abs(img.at(c, y1, x1) - img.at(c, y0, x0));
  return s / 3.0;
}

}  // namespace

WarpResult warp_right_to_left(const Image& right, const DisparityMap& disp) {
  check_disp_size(disp, right);
  WarpResult out{Image(right.width(), right.height()), PixelMask(right.width(), right.height())};
  for (int y = 0; y < right.height(); ++y) {
    for (int x = 0; x < right.width(); ++x) {
      if (!disp.valid(y, x)) continue;
      const Sample s = bilinear_sample(right, x - disp.at(y, x), y);
      if (!s.in_bounds) continue;
      for (int c = 0; c < 3; ++c) out.warped.at(c, y, x) = s.color[c];
      out.valid.set(y, x, true);
    }
  }
  return out;
}

OcclusionMask occlusion_oracle(const DisparityMap& gt, OcclusionScan scan) {
  const int w = gt.width();
  OcclusionMask out(w, gt.height(), OcclusionKind::kOracle);
  auto target = [&](int y, int x) { return static_cast<long long>(std::floor(x - gt.at(y, x) + 0.5)); };
  for (int y = 0; y < gt.height(); ++y) {
    if (scan == OcclusionScan::kForward) {
      std::unordered_set<long long> seen;
      for (int x = w - 1; x >= 0; --x) {
        if (!gt.valid(y, x)) continue;
        const long long t = target(y, x);
        if (seen.contains(t)) out.at(y, x) = 1.0;
        seen.insert(t);
      }
    } else {
      std::unordered_map<long long, int> hits;
      for (int x = 0; x < w; ++x) {
        if (gt.valid(y, x)) ++hits[target(y, x)];
      }
      for (int x = 0; x < w; ++x) {
        if (gt.valid(y, x) && hits[target(y, x)] > 1) out.at(y, x) = 1.0;
      }
    }
  }
  return out;
}

Planar ssim3x3(const Image& a, const Image& b) {
  check_image_pair(a, b);
  const int w = a.width();
  const int h = a.height();
  Planar out(1, h, w);
  parallel_for(0, h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int c = 0; c < 3; ++c) s += ssim_terms(moments_at(a.plane(c), b.plane(c), w, h, y, x)).value;
      out.at(0, y, x) = s / 3.0;
    }
  });
  return out;
}

double reconstruction_loss(const Image& left, const Image& warped, const OcclusionMask& occ,
                           const PixelMask& warp_valid, double alpha) {
  check_image_pair(left, warped);
  check_occ(occ, left);
  const Image a = masked(left, occ);
  const Image b = masked(warped, occ);
  const Planar ssim = ssim3x3(a, b);
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < left.height(); ++y) {
    for (int x = 0; x < left.width(); ++x) {
      if (!warp_valid(y, x)) continue;
      double l1 = 0.0;
      for (int c = 0; c < 3; ++c) l1 += std::abs(a.at(c, y, x) - b.at(c, y, x));
      sum += alpha * (1.0 - ssim.at(0, y, x)) / 2.0 + (1.0 - alpha) * l1 / 3.0;
      ++n;
    }
  }
  if (n == 0) throw Error("empty loss support");
  return sum / static_cast<double>(n);
}

double occlusion_regularizer(const OcclusionMask& occ) {
  const auto v = occ.values();
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double o : v) s += std::abs(o);
  return s / static_cast<double>(v.size());
}

double smoothness_loss(const DisparityMap& disp, const Image& img) {
  check_disp_size(disp, img);
  double sx = 0.0, sy = 0.0;
  std::size_t nx = 0, ny = 0;
  for (int y = 0; y < disp.height(); ++y) {
    for (int x = 0; x < disp.width(); ++x) {
      if (!disp.valid(y, x)) continue;
      if (x + 1 < disp.width() && disp.valid(y, x + 1)) {
        sx += std::abs(disp.at(y, x + 1) - disp.at(y, x)) * std::exp(-mean_abs_step(img, y, x, y, x + 1));
        ++nx;
      }
      if (y + 1 < disp.height() && disp.valid(y + 1, x)) {
        sy += std::abs(disp.at(y + 1, x) - disp.at(y, x)) * std::exp(-mean_abs_step(img, y, x, y + 1, x));
        ++ny;
      }
    }
  }
  return (nx ? sx / static_cast<double>(nx) : 0.0) + (ny ? sy / static_cast<double>(ny) : 0.0);
}

LossBreakdown total_loss(const LossParts& parts, const LossWeights& weights) {
  weights.validate();
  LossBreakdown out{parts, weights, 0.0};
  // Extended-precision accumulation, rounded once.
  long double t = parts.l_s_main;
  t += static_cast<long double>(weights.w_s_occ) * parts.l_s_occ;
  t += static_cast<long double>(weights.w_t_ar) * parts.l_t_ar;
  t += static_cast<long double>(weights.w_t_occ) * parts.l_t_occ;
  t += static_cast<long double>(weights.w_t_sm) * parts.l_t_sm;
  out.total = static_cast<double>(t);
  return out;
}

double target_objective(const Image& left, const Image& right, const DisparityMap& disp,
                        const OcclusionMask& occ, double alpha) {
  const WarpResult warp = warp_right_to_left(right, disp);
  return reconstruction_loss(left, warp.warped, occ, warp.valid, alpha) + smoothness_loss(disp, left);
}

DisparityGradient reconstruction_grad_wrt_disp(const Image& left, const Image& right,
                                               const DisparityMap& disp, const OcclusionMask& occ,
                                               double alpha) {
  check_image_pair(left, right);
  check_disp_size(disp, left);
  check_occ(occ, left);
  const int w = left.width();
  const int h = left.height();
  const WarpResult warp = warp_right_to_left(right, disp);
  const Image a = masked(left, occ);
  const Image b = masked(warp.warped, occ);
  const std::size_t n = warp.valid.count();
  if (n == 0) throw Error("empty loss support");
  const double inv_n = 1.0 / static_cast<double>(n);

  // dL/dB for the masked warped image.
  Planar grad_b(3, h, w);
  const double d_ssim = -alpha / 2.0 * inv_n / 3.0;
  const double d_l1 = (1.0 - alpha) * inv_n / 3.0;
  for (int c = 0; c < 3; ++c) {
    const auto pa = a.plane(c);
    const auto pb = b.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!warp.valid(y, x)) continue;
        const double diff = pb[static_cast<std::size_t>(y) * w + x] - pa[static_cast<std::size_t>(y) * w + x];
        grad_b.at(c, y, x) += d_l1 * static_cast<double>((diff > 0.0) - (diff < 0.0));

        const Moments m = moments_at(pa, pb, w, h, y, x);
        const SsimTerms t = ssim_terms(m);
        const double dd = t.d1 * t.d2;
        const double ds_mu_b = 2.0 * m.mu_a * (t.n2 - t.n1) / dd - t.value * (2.0 * m.mu_b / t.d1 - 2.0 * m.mu_b / t.d2);
        const double ds_eb2 = -t.value / t.d2;
        const double ds_eab = 2.0 * t.n1 / dd;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = reflect(y + dy, h);
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = reflect(x + dx, w);
            const std::size_t k = static_cast<std::size_t>(yy) * w + xx;
            grad_b.at(c, yy, xx) += d_ssim * (ds_mu_b + ds_eb2 * 2.0 * pb[k] + ds_eab * pa[k]) / 9.0;
          }
        }
      }
    }
  }

  DisparityGradient out{Planar(1, h, w), PixelMask(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!warp.valid(y, x)) continue;
      const double u = x - disp.at(y, x);
      const double frac = u - std::floor(u);
      out.differentiable.set(y, x, frac > 1e-9 && frac < 1.0 - 1e-9);
      const int x0 = std::min(static_cast<int>(std::floor(u)), w - 2);
      const double keep = 1.0 - occ.at(y, x);
      double g = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double slope = -(right.at(c, y, x0 + 1) - right.at(c, y, x0));
        g += grad_b.at(c, y, x) * keep * slope;
      }
      out.grad.at(0, y, x) = g;
    }
  }

  // Smoothness term.
  std::size_t nx = 0, ny = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!disp.valid(y, x)) continue;
      if (x + 1 < w && disp.valid(y, x + 1)) ++nx;
      if (y + 1 < h && disp.valid(y + 1, x)) ++ny;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!disp.valid(y, x)) continue;
      if (x + 1 < w && disp.valid(y, x + 1)) {
        const double diff = disp.at(y, x + 1) - disp.at(y, x);
        const double g = static_cast<double>((diff > 0.0) - (diff < 0.0)) *
                         std::exp(-mean_abs_step(left, y, x, y, x + 1)) / static_cast<double>(nx);
        out.grad.at(0, y, x + 1) += g;
        out.grad.at(0, y, x) -= g;
      }
      if (y + 1 < h && disp.valid(y + 1, x)) {
        const double diff = disp.at(y + 1, x) - disp.at(y, x);
        const double g = static_cast<double>((diff > 0.0) - (diff < 0.0)) *
                         std::exp(-mean_abs_step(left, y, x, y + 1, x)) / static_cast<double>(ny);
        out.grad.at(0, y + 1, x) += g;
        out.grad.at(0, y, x) -= g;
      }
    }
  }
  return out;
}

GradCheckResult check_disparity_gradient(const Image& left, const Image& right, const DisparityMap& disp,
                                         const OcclusionMask& occ, double alpha, std::size_t probes,
                                         double step, std::uint64_t seed) {
  if (!(step > 0.0)) throw Error("finite-difference step must be positive");
  const DisparityGradient analytic = reconstruction_grad_wrt_disp(left, right, disp, occ, alpha);
  const WarpResult warp = warp_right_to_left(right, disp);
  const int w = left.width();
  const int h = left.height();

  auto smooth_probe = [&](int y, int x) {
    if (!analytic.differentiable(y, x)) return false;
    const double u = x - disp.at(y, x);
    const double frac = u - std::floor(u);
    if (frac < 2.0 * step || frac > 1.0 - 2.0 * step) return false;
    const int x0 = static_cast<int>(std::floor(u));
    const double keep = 1.0 - occ.at(y, x);
    for (int c = 0; c < 3; ++c) {
      const double slope = std::abs(right.at(c, y, x0 + 1) - right.at(c, y, x0));
      const double gap = keep * std::abs(warp.warped.at(c, y, x) - left.at(c, y, x));
      if (gap <= 2.0 * keep * slope * step + 1e-12) return false;
    }
    const int ny[4] = {y, y, y - 1, y + 1};
    const int nx[4] = {x - 1, x + 1, x, x};
    for (int i = 0; i < 4; ++i) {
      if (ny[i] < 0 || ny[i] >= h || nx[i] < 0 || nx[i] >= w || !disp.valid(ny[i], nx[i])) continue;
      if (std::abs(disp.at(ny[i], nx[i]) - disp.at(y, x)) <= 2.0 * step) return false;
    }
    return true;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_y(0, h - 1);
  std::uniform_int_distribution<int> pick_x(0, w - 1);
  GradCheckResult result;
  double sum = 0.0;
  DisparityMap probe = disp;
  const std::size_t max_attempts = 200 * probes + 1000;
  for (std::size_t attempt = 0; attempt < max_attempts && result.probes < probes; ++attempt) {
    const int y = pick_y(rng);
    const int x = pick_x(rng);
    if (!smooth_probe(y, x)) continue;
    const double d0 = disp.at(y, x);
    probe.at(y, x) = d0 + step;
    const double plus = target_objective(left, right, probe, occ, alpha);
    probe.at(y, x) = d0 - step;
    const double minus = target_objective(left, right, probe, occ, alpha);
    probe.at(y, x) = d0;
    const double numeric = (plus - minus) / (2.0 * step);
    const double a = analytic.grad.at(0, y, x);
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    result.max_rel_error = std::max(result.max_rel_error, rel);
    sum += rel;
    ++result.probes;
  }
  if (result.probes > 0) result.mean_rel_error = sum / static_cast<double>(result.probes);
  return result;
}

}  // namespace stereoadapt
