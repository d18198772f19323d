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

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "stereoadapt/dataio.hpp"

namespace stereoadapt {

namespace {

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  std::string_view token() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !is_space(s_[pos_])) ++pos_;
    if (start == pos_) throw Error("malformed PFM header: unexpected end of header");
    return s_.substr(start, pos_ - start);
  }

  template <class T>
  T number(const char* what) {
    const std::string_view tok = token();
    T value{};
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || end != tok.data() + tok.size()) {
      throw Error(std::string("malformed PFM header: bad ") + what);
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the samples.
  std::size_t payload_offset() {
    if (pos_ >= s_.size() || !is_space(s_[pos_])) throw Error("malformed PFM header: missing separator");
    return pos_ + 1;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::uint32_t swap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
}

bool host_little_endian() { return std::endian::native == std::endian::little; }

std::string format_scale(double magnitude, bool little_endian) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), magnitude);
  std::string text(buf, end);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return (little_endian ? "-" : "") + text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

PfmRaster decode_pfm(std::string_view bytes) {
  Cursor cur(bytes);
  PfmRaster r;
  const std::string_view magic = cur.token();
  if (magic == "Pf") {
    r.channels = 1;
  } else if (magic == "PF") {
    r.channels = 3;
  } else {
    throw Error("malformed PFM header: bad magic");
  }
  r.width = cur.number<int>("width");
  r.height = cur.number<int>("height");
  if (r.width <= 0 || r.height <= 0) throw Error("malformed PFM header: non-positive dimensions");
  const double scale = cur.number<double>("scale");
  if (scale == 0.0 || !std::isfinite(scale)) throw Error("malformed PFM header: bad scale");
  r.little_endian = scale < 0.0;
  r.scale = std::abs(scale);

  const std::size_t offset = cur.payload_offset();
  const std::size_t count = static_cast<std::size_t>(r.width) * r.height * r.channels;
  if (bytes.size() - offset < count * 4) throw Error("truncated PFM payload");

  r.data.resize(count);
  const bool swap = r.little_endian != host_little_endian();
  const std::size_t row = static_cast<std::size_t>(r.width) * r.channels;
  for (int y = 0; y < r.height; ++y) {
    // File rows run bottom-up.
    const char* src = bytes.data() + offset + static_cast<std::size_t>(r.height - 1 - y) * row * 4;
    for (std::size_t i = 0; i < row; ++i) {
      std::uint32_t bits;
      std::memcpy(&bits, src + i * 4, 4);
      if (swap) bits = swap32(bits);
      r.data[static_cast<std::size_t>(y) * row + i] = std::bit_cast<float>(bits);
    }
  }
  return r;
}

std::string encode_pfm(const PfmRaster& r) {
  if (r.channels != 1 && r.channels != 3) throw Error("PFM supports 1 or 3 channels");
  const std::size_t row = static_cast<std::size_t>(r.width) * r.channels;
  if (r.data.size() != row * r.height) throw Error("PFM raster size does not match its dimensions");
  std::string out = (r.channels == 1 ? "Pf\n" : "PF\n") + std::to_string(r.width) + " " +
                    std::to_string(r.height) + "\n" + format_scale(r.scale, r.little_endian) + "\n";
  const std::size_t header = out.size();
  out.resize(header + row * r.height * 4);
  const bool swap = r.little_endian != host_little_endian();
  for (int y = 0; y < r.height; ++y) {
    char* dst = out.data() + header + static_cast<std::size_t>(r.height - 1 - y) * row * 4;
    for (std::size_t i = 0; i < row; ++i) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(r.data[static_cast<std::size_t>(y) * row + i]);
      if (swap) bits = swap32(bits);
      std::memcpy(dst + i * 4, &bits, 4);
    }
  }
  return out;
}

PfmRaster read_pfm(const std::filesystem::path& path) { return decode_pfm(read_file(path)); }

void write_pfm(const std::filesystem::path& path, const PfmRaster& raster) {
  write_file(path, encode_pfm(raster));
}

DisparityMap pfm_to_disparity(const PfmRaster& r) {
  if (r.channels != 1) throw Error("disparity PFM must have one channel");
  DisparityMap d(r.width, r.height, 0.0, false);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const float v = r.at(y, x);
      if (!std::isfinite(v)) continue;
      d.at(y, x) = v;
      d.set_valid(y, x, true);
    }
  }
  return d;
}

PfmRaster disparity_to_pfm(const DisparityMap& d) {
  PfmRaster r;
  r.width = d.width();
  r.height = d.height();
  r.channels = 1;
  r.data.resize(static_cast<std::size_t>(r.width) * r.height);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      r.data[static_cast<std::size_t>(y) * r.width + x] =
          d.valid(y, x) ? static_cast<float>(d.at(y, x)) : std::numeric_limits<float>::quiet_NaN();
    }
  }
  return r;
}

OcclusionMask pfm_to_occlusion(const PfmRaster& r) {
  if (r.channels != 1) throw Error("occlusion PFM must have one channel");
  OcclusionMask m(r.width, r.height, OcclusionKind::kSoft);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const float v = r.at(y, x);
      if (!(v >= 0.0f && v <= 1.0f)) throw Error("occlusion values must lie in [0,1]");
      m.at(y, x) = v;
    }
  }
  return m;
}

DisparityMap read_pfm_disparity(const std::filesystem::path& path) { return pfm_to_disparity(read_pfm(path)); }

void write_pfm_disparity(const std::filesystem::path& path, const DisparityMap& disp) {
  write_pfm(path, disparity_to_pfm(disp));
}

}  // namespace stereoadapt
