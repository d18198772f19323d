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

#include "stereoadapt/color.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace stereoadapt {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Vec3 mul(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Mat3 inverse(const Mat3& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  Mat3 inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

// Reinhard et al. RGB -> LMS cone response.
constexpr Mat3 kRgbToLms{{{0.3811, 0.5783, 0.0402}, {0.1967, 0.7244, 0.0782}, {0.0241, 0.1288, 0.8444}}};

// log LMS -> l alpha beta opponent axes.
const Mat3& log_lms_to_lab() {
  static const Mat3 m = [] {
    const double a = 1.0 / std::sqrt(3.0);
    const double b = 1.0 / std::sqrt(6.0);
    const double c = 1.0 / std::sqrt(2.0);
    return Mat3{{{a, a, a}, {b, b, -2.0 * b}, {c, -c, 0.0}}};
  }();
  return m;
}

const Mat3& lab_to_log_lms() {
  static const Mat3 m = inverse(log_lms_to_lab());
  return m;
}

const Mat3& lms_to_rgb() {
  static const Mat3 m = inverse(kRgbToLms);
  return m;
}

// sRGB (linear) -> XYZ, D65.
constexpr Mat3 kLinearToXyz{{{0.4124564, 0.3575761, 0.1804375},
                             {0.2126729, 0.7151522, 0.0721750},
                             {0.0193339, 0.1191920, 0.9503041}}};
constexpr Vec3 kD65White{0.95047, 1.0, 1.08883};

const Mat3& xyz_to_linear() {
  static const Mat3 m = inverse(kLinearToXyz);
  return m;
}

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  if (c <= 0.0) return 0.0;
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

constexpr double kLabDelta = 6.0 / 29.0;

double lab_f(double t) {
  return t > kLabDelta * kLabDelta * kLabDelta ? std::cbrt(t)
                                               : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
  return t > kLabDelta ? t * t * t : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

Vec3 rgb_to_log_lab(const Vec3& rgb) {
  Vec3 lms = mul(kRgbToLms, rgb);
  for (double& v : lms) v = std::log10(std::max(v, kLogFloor));
  return mul(log_lms_to_lab(), lms);
}

Vec3 log_lab_to_rgb(const Vec3& lab) {
  Vec3 lms = mul(lab_to_log_lms(), lab);
  for (double& v : lms) v = std::pow(10.0, v);
  return mul(lms_to_rgb(), lms);
}

Vec3 rgb_to_cielab(const Vec3& rgb) {
  Vec3 xyz = mul(kLinearToXyz, {srgb_to_linear(rgb[0]), srgb_to_linear(rgb[1]), srgb_to_linear(rgb[2])});
  const double fx = lab_f(xyz[0] / kD65White[0]);
  const double fy = lab_f(xyz[1] / kD65White[1]);
  const double fz = lab_f(xyz[2] / kD65White[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Vec3 cielab_to_rgb(const Vec3& lab) {
  const double fy = (lab[0] + 16.0) / 116.0;
  const double fx = fy + lab[1] / 500.0;
  const double fz = fy - lab[2] / 200.0;
  const Vec3 xyz{kD65White[0] * lab_f_inv(fx), kD65White[1] * lab_f_inv(fy), kD65White[2] * lab_f_inv(fz)};
  const Vec3 lin = mul(xyz_to_linear(), xyz);
  return {linear_to_srgb(lin[0]), linear_to_srgb(lin[1]), linear_to_srgb(lin[2])};
}

template <class Fn>
void convert_pixels(const Planar& in, Planar& out, Fn&& fn) {
  const std::size_t n = in.plane_size();
  const auto a = in.plane(0), b = in.plane(1), c = in.plane(2);
  auto oa = out.plane(0), ob = out.plane(1), oc = out.plane(2);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 v = fn(Vec3{a[i], b[i], c[i]});
    oa[i] = v[0];
    ob[i] = v[1];
    oc[i] = v[2];
  }
}

}  // namespace

ColorSpace parse_color_space(std::string_view name) {
  if (name == "log-lab") return ColorSpace::kLogLab;
  if (name == "cielab") return ColorSpace::kCieLab;
  throw Error("unknown colour space '" + std::string(name) + "'");
}

std::string to_string(ColorSpace space) {
  return space == ColorSpace::kLogLab ? "log-lab" : "cielab";
}

ColorRaster rgb_to_working(const Image& img, ColorSpace space) {
  ColorRaster out(img.width(), img.height());
  if (space == ColorSpace::kLogLab) {
    convert_pixels(img, out, rgb_to_log_lab);
  } else {
    convert_pixels(img, out, rgb_to_cielab);
  }
  return out;
}

Image working_to_rgb(const ColorRaster& raster, ColorSpace space) {
  Image out(raster.width(), raster.height());
  auto clamp01 = [](const Vec3& v) {
    return Vec3{std::clamp(v[0], 0.0, 1.0), std::clamp(v[1], 0.0, 1.0), std::clamp(v[2], 0.0, 1.0)};
  };
  if (space == ColorSpace::kLogLab) {
    convert_pixels(raster, out, [&](const Vec3& v) { return clamp01(log_lab_to_rgb(v)); });
  } else {
    convert_pixels(raster, out, [&](const Vec3& v) { return clamp01(cielab_to_rgb(v)); });
  }
  return out;
}

ColorStats channel_stats(const Planar& raster) {
  if (raster.plane_size() == 0 || raster.channels() != 3) throw Error("channel_stats needs a non-empty 3-channel raster");
  ColorStats stats;
  for (int c = 0; c < 3; ++c) {
    // Welford's running update.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double v : raster.plane(c)) {
      ++n;
      const double delta = v - mean;
      mean += delta / static_cast<double>(n);
      m2 += delta * (v - mean);
    }
    stats.mean[c] = mean;
    stats.std[c] = std::sqrt(std::max(0.0, m2 / static_cast<double>(n)));
  }
  return stats;
}

TransferState momentum_update(TransferState state, const ColorStats& sample) {
  if (!state.initialized) {
    state.running_mean = sample.mean;
    state.running_std = sample.std;
    state.initialized = true;
    return state;
  }
  const double g = state.gamma;
  for (int c = 0; c < 3; ++c) {
    state.running_mean[c] = (1.0 - g) * state.running_mean[c] + g * sample.mean[c];
    state.running_std[c] = (1.0 - g) * state.running_std[c] + g * sample.std[c];
  }
  return state;
}

ColorMap fit_color_map(const ColorStats& source, const TransferState& state) {
  ColorMap map;
  for (int c = 0; c < 3; ++c) {
    map.lambda[c] = source.std[c] < kMinSourceStd ? 1.0 : state.running_std[c] / source.std[c];
    map.source_mean[c] = source.mean[c];
    map.target_mean[c] = state.running_mean[c];
  }
  return map;
}

ColorRaster apply_color_map(const ColorRaster& raster, const ColorMap& map) {
  ColorRaster out(raster.width(), raster.height());
  for (int c = 0; c < 3; ++c) {
    const auto in = raster.plane(c);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < in.size(); ++i) {
      dst[i] = map.lambda[c] * (in[i] - map.source_mean[c]) + map.target_mean[c];
    }
  }
  return out;
}

TransferredPair transfer_pair(const Image& left, const Image& right, const TransferState& state) {
  if (!state.initialized) throw Error("colour transfer state has no target statistics yet");
  if (left.width() != right.width() || left.height() != right.height()) {
    throw Error("stereo views differ in size");
  }
  const ColorRaster left_w = rgb_to_working(left, state.space);
  const ColorRaster right_w = rgb_to_working(right, state.space);
  TransferredPair out;
  out.map = fit_color_map(channel_stats(left_w), state);
  out.left = working_to_rgb(apply_color_map(left_w, out.map), state.space);
  out.right = working_to_rgb(apply_color_map(right_w, out.map), state.space);
  return out;
}

ProgressiveColorTransfer::ProgressiveColorTransfer(double gamma, ColorSpace space) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("gamma must lie in [0,1]");
  state_.gamma = gamma;
  state_.space = space;
}

TransferredPair ProgressiveColorTransfer::step(const Image& source_left, const Image& source_right,
                                               const Image& target) {
  state_ = momentum_update(state_, channel_stats(rgb_to_working(target, state_.space)));
  return transfer_pair(source_left, source_right, state_);
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with rejection sampling so the permutation does not depend
  // on the standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(order[i - 1], order[r % bound]);
  }
  return order;
}

}  // namespace stereoadapt
