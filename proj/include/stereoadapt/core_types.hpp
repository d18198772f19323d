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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stereoadapt {

/// Raised for every contract violation and I/O failure in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense C x H x W tensor of doubles, planar and row-major:
/// element (c, y, x) lives at index (c * H + y) * W + x.
class Planar {
 public:
  Planar() = default;
  Planar(int channels, int height, int width, double fill = 0.0);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }
  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<double> plane(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const double> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Planar& other) const {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const;

  friend bool operator==(const Planar&, const Planar&) = default;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Three-channel RGB raster with intensities in [0, 1].
class Image : public Planar {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0) : Planar(3, height, width, fill) {}

  /// Finite, in [0,1], and at least 2x2.
  bool is_valid() const;
};

/// Single-channel intensity raster in [0, 1].
class GrayImage : public Planar {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0) : Planar(1, height, width, fill) {}

  double& at(int y, int x) { return Planar::at(0, y, x); }
  double at(int y, int x) const { return Planar::at(0, y, x); }
};

/// C x H x W per-pixel descriptors.
class FeatureMap : public Planar {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width, double fill = 0.0)
      : Planar(channels, height, width, fill) {}
};

/// D x H x W similarity scores (higher is a better match) with a parallel
/// validity volume. Slice d holds candidate disparity d.
class CostVolume : public Planar {
 public:
  CostVolume() = default;
  CostVolume(int disparities, int height, int width);

  int disparities() const { return channels(); }
  bool valid(int d, int y, int x) const { return valid_[index(d, y, x)] != 0; }
  void set_valid(int d, int y, int x, bool v) { valid_[index(d, y, x)] = v ? 1 : 0; }
  std::span<const std::uint8_t> validity() const { return valid_; }

 private:
  std::vector<std::uint8_t> valid_;
};

/// Per-pixel boolean mask, row-major.
class PixelMask {
 public:
  PixelMask() = default;
  PixelMask(int width, int height, bool fill = false)
      : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool operator()(int y, int x) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int y, int x, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
  std::size_t count() const;

  friend bool operator==(const PixelMask&, const PixelMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Real disparities in pixels plus a validity mask. Invalid pixels never
/// contribute to a loss or metric.
class DisparityMap {
 public:
  DisparityMap() = default;
  DisparityMap(int width, int height, double fill = 0.0, bool valid = true)
      : values_(1, height, width, fill), valid_(width, height, valid) {}

  int width() const { return values_.width(); }
  int height() const { return values_.height(); }
  double& at(int y, int x) { return values_.at(0, y, x); }
  double at(int y, int x) const { return values_.at(0, y, x); }
  bool valid(int y, int x) const { return valid_(y, x); }
  void set_valid(int y, int x, bool v) { valid_.set(y, x, v); }
  const PixelMask& mask() const { return valid_; }
  std::span<const double> values() const { return values_.data(); }

  /// Valid pixels finite and within [0, max_disparity].
  bool is_valid(double max_disparity) const;

  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;

 private:
  Planar values_;
  PixelMask valid_;
};

enum class OcclusionKind { kOracle, kSoft };

/// Per-pixel occlusion: exact {0,1} for the geometric oracle, probabilities
/// in [0,1] for predicted masks.
class OcclusionMask {
 public:
  OcclusionMask() = default;
  OcclusionMask(int width, int height, OcclusionKind kind, double fill = 0.0)
      : values_(1, height, width, fill), kind_(kind) {}

  int width() const { return values_.width(); }
  int height() const { return values_.height(); }
  OcclusionKind kind() const { return kind_; }
  double& at(int y, int x) { return values_.at(0, y, x); }
  double at(int y, int x) const { return values_.at(0, y, x); }
  std::span<const double> values() const { return values_.data(); }

  bool is_valid() const;

  friend bool operator==(const OcclusionMask&, const OcclusionMask&) = default;

 private:
  Planar values_;
  OcclusionKind kind_ = OcclusionKind::kSoft;
};

struct Sample {
  std::array<double, 3> color{};
  bool in_bounds = false;
};

/// Bilinear interpolation of the four lattice neighbours of (x, y).
/// Coordinates on the last row/column are in bounds; anything that would need
/// a neighbour outside the raster yields zero colour and in_bounds = false.
Sample bilinear_sample(const Image& img, double x, double y);

/// Rec. 601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage to_grayscale(const Image& img);

}  // namespace stereoadapt
