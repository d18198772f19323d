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
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stereoadapt/dataio.hpp"
#include "stereoadapt/reconstruction.hpp"
#include "test_support.hpp"

using namespace stereoadapt;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("stereoadapt_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void touch(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << "x";
}

std::string le_floats(const std::vector<float>& v) {
  std::string out;
  for (float f : v) {
    auto bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  return out;
}

std::string be_floats(const std::vector<float>& v) {
  std::string out;
  for (float f : v) {
    auto bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  return out;
}

}  // namespace

TEST_CASE("decode_pfm little-endian header") {
  // Stored bottom-up: the first 4 samples are the bottom row.
  const std::string bytes = "Pf\n4 2\n-1.0\n" + le_floats({5, 6, 7, 8, 1, 2, 3, 4});
  REQUIRE(bytes.size() == 12 + 32);
  const PfmRaster r = decode_pfm(bytes);
  CHECK(r.width == 4);
  CHECK(r.height == 2);
  CHECK(r.channels == 1);
  CHECK(r.little_endian);
  CHECK(r.at(0, 0) == 1.0f);
  CHECK(r.at(1, 3) == 8.0f);
  CHECK(encode_pfm(r) == bytes);
}

TEST_CASE("decode_pfm big-endian and colour") {
  const std::string bytes = "PF\n1 2\n2.5\n" + be_floats({0.5f, 1.5f, 2.5f, -1, -2, -3});
  const PfmRaster r = decode_pfm(bytes);
  CHECK(r.channels == 3);
  CHECK_FALSE(r.little_endian);
  CHECK(r.scale == 2.5);
  CHECK(r.at(0, 0, 2) == -3.0f);
  CHECK(r.at(1, 0, 1) == 1.5f);
  CHECK(encode_pfm(r) == bytes);
}

TEST_CASE("decode_pfm errors") {
  CHECK_THROWS_AS(decode_pfm("P6\n1 1\n-1.0\n" + le_floats({1})), Error);
  CHECK_THROWS_AS(decode_pfm("Pf\n4 2\n-1.0\n" + le_floats({1, 2, 3})), Error);
  CHECK_THROWS_AS(decode_pfm("Pf\nfour 2\n-1.0\n" + le_floats({1})), Error);
  CHECK_THROWS_AS(decode_pfm("Pf\n1 1\n0\n" + le_floats({1})), Error);
  CHECK_THROWS_AS(decode_pfm(""), Error);
}

TEST_CASE("PFM files round-trip bitwise") {
  TempDir tmp;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-100.0f, 100.0f);
  for (bool little : {true, false}) {
    PfmRaster r;
    r.width = 7;
    r.height = 5;
    r.little_endian = little;
    r.data.resize(35);
    for (float& v : r.data) v = u(rng);
    r.data[3] = std::numeric_limits<float>::quiet_NaN();
    const fs::path p = tmp.path() / "a.pfm";
    write_pfm(p, r);
    const std::string first = slurp(p);
    write_pfm(p, read_pfm(p));
    CHECK(slurp(p) == first);
    const PfmRaster back = read_pfm(p);
    CHECK(std::memcmp(back.data.data(), r.data.data(), r.data.size() * sizeof(float)) == 0);
  }
}

TEST_CASE("PFM disparity maps mark NaN invalid") {
  DisparityMap d(3, 2, 4.25);
  d.set_valid(1, 2, false);
  const PfmRaster r = disparity_to_pfm(d);
  CHECK(std::isnan(r.at(1, 2)));
  const DisparityMap back = pfm_to_disparity(r);
  CHECK_FALSE(back.valid(1, 2));
  CHECK(back.valid(0, 0));
  CHECK(back.at(0, 1) == 4.25);
}

TEST_CASE("16-bit PNG disparity convention") {
  Png16Raster raw{2, 1, {256, 0}};
  const DisparityMap d = png16_to_disparity(raw);
  CHECK(d.valid(0, 0));
  CHECK(d.at(0, 0) == 1.0);
  CHECK_FALSE(d.valid(0, 1));

  DisparityMap big(3, 1, 0.0);
  big.at(0, 0) = 1000.0;
  big.at(0, 1) = 0.001;
  big.at(0, 2) = 2.5;
  const Png16Raster enc = disparity_to_png16(big);
  CHECK(enc.data[0] == 65535);
  CHECK(enc.data[1] == 1);
  CHECK(enc.data[2] == 640);
}

TEST_CASE("16-bit PNG files round-trip bitwise") {
  TempDir tmp;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> u(0, 65535);
  Png16Raster r{13, 9, {}};
  for (int i = 0; i < 13 * 9; ++i) r.data.push_back(static_cast<std::uint16_t>(u(rng)));
  const fs::path p = tmp.path() / "d.png";
  write_png16(p, r);
  const Png16Raster back = read_png16(p);
  CHECK(back.data == r.data);
  const std::string first = slurp(p);
  write_png16(p, back);
  CHECK(slurp(p) == first);

  write_image(tmp.path() / "rgb.png", testing::constant_image(4, 4, 0.2, 0.4, 0.6));
  CHECK_THROWS_AS(read_png16(tmp.path() / "rgb.png"), Error);

  DisparityMap d(5, 4, 12.5);
  d.set_valid(2, 2, false);
  write_disparity(tmp.path() / "disp.png", d);
  write_disparity(tmp.path() / "disp.pfm", d);
  const DisparityMap from_png = read_disparity(tmp.path() / "disp.png");
  CHECK(from_png.mask() == d.mask());
  CHECK(from_png.at(3, 4) == 12.5);
  const DisparityMap from_pfm = read_disparity(tmp.path() / "disp.pfm");
  CHECK(from_pfm.mask() == d.mask());
  CHECK(from_pfm.at(0, 0) == 12.5);
}

TEST_CASE("8-bit images") {
  TempDir tmp;
  std::mt19937_64 rng(3);
  Image img = testing::random_image(rng, 11, 6);
  for (double& v : img.data()) v = std::round(v * 255.0) / 255.0;
  write_image(tmp.path() / "i.png", img);
  const Image back = read_image(tmp.path() / "i.png");
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.data()[i] == doctest::Approx(img.data()[i]).epsilon(1e-12));

  Planar gray(1, 3, 4, 0.5);
  gray.at(0, 1, 1) = 1.0;
  write_gray(tmp.path() / "g.png", gray);
  const Image g3 = read_image(tmp.path() / "g.png");
  CHECK(g3.at(0, 1, 1) == 1.0);
  CHECK(g3.at(2, 1, 1) == 1.0);
  CHECK(g3.at(1, 0, 0) == doctest::Approx(128.0 / 255.0));

  CHECK_THROWS_AS(read_image(tmp.path() / "missing.png"), Error);
  std::ofstream(tmp.path() / "junk.png") << "not a png";
  CHECK_THROWS_AS(read_image(tmp.path() / "junk.png"), Error);
}

TEST_CASE("list_pairs layouts") {
  TempDir tmp;
  const fs::path flat = tmp.path() / "flat";
  touch(flat / "left" / "000.png");
  touch(flat / "right" / "000.png");
  touch(flat / "left" / "001.png");
  const PairListing f = list_pairs({Layout::kFlatPairs, flat});
  REQUIRE(f.pairs.size() == 1);
  CHECK(f.pairs[0].right == flat / "right" / "000.png");
  CHECK(f.skipped == 1);
  CHECK(f.warnings.size() == 1);

  const fs::path kitti = tmp.path() / "kitti";
  for (const char* n : {"000010_10.png", "000002_10.png"}) {
    touch(kitti / "image_2" / n);
    touch(kitti / "image_3" / n);
    touch(kitti / "disp_occ_0" / n);
  }
  const PairListing k = list_pairs({Layout::kKitti, kitti});
  REQUIRE(k.pairs.size() == 2);
  CHECK(k.pairs[0].left.filename() == "000002_10.png");
  CHECK(k.pairs[1].gt_disparity == kitti / "disp_occ_0" / "000010_10.png");

  const fs::path mb = tmp.path() / "mb";
  touch(mb / "Adirondack" / "im0.png");
  touch(mb / "Adirondack" / "im1.png");
  touch(mb / "Adirondack" / "disp0GT.pfm");
  const PairListing m = list_pairs({Layout::kMiddlebury, mb});
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].gt_disparity == mb / "Adirondack" / "disp0GT.pfm");

  const fs::path sf = tmp.path() / "sf";
  touch(sf / "frames_cleanpass" / "A" / "0000" / "left" / "0006.png");
  touch(sf / "frames_cleanpass" / "A" / "0000" / "right" / "0006.png");
  touch(sf / "disparity" / "A" / "0000" / "left" / "0006.pfm");
  const PairListing s = list_pairs({Layout::kSceneFlow, sf});
  REQUIRE(s.pairs.size() == 1);
  CHECK(s.pairs[0].gt_disparity == sf / "disparity" / "A" / "0000" / "left" / "0006.pfm");

  fs::create_directories(tmp.path() / "empty");
  CHECK(list_pairs({Layout::kFlatPairs, tmp.path() / "empty"}).pairs.empty());
  CHECK_THROWS_AS(list_pairs({Layout::kFlatPairs, tmp.path() / "nope"}), Error);
  CHECK(parse_layout("middlebury") == Layout::kMiddlebury);
  CHECK_THROWS_AS(parse_layout("eth3d-ish"), Error);
}

TEST_CASE("synth_rds") {
  const SyntheticPair zero = synth_rds(32, 16, 0, std::nullopt, 1);
  CHECK(zero.left == zero.right);
  for (double v : zero.disparity.values()) CHECK(v == 0.0);
  for (double v : zero.occlusion.values()) CHECK(v == 0.0);

  const SyntheticPair a = synth_rds(64, 32, 10, std::nullopt, 9);
  const SyntheticPair b = synth_rds(64, 32, 10, std::nullopt, 9);
  CHECK(a.left == b.left);
  CHECK(a.right == b.right);
  CHECK(a.disparity == b.disparity);

  const SyntheticPair s = synth_rds(80, 40, 10, Rect{20, 10, 40, 20}, 4);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 80; ++x) {
      const bool in_band = y >= 10 && y < 30 && x >= 10 && x < 20;
      CHECK(s.occlusion.at(y, x) == (in_band ? 1.0 : 0.0));
      const bool in_fg = y >= 10 && y < 30 && x >= 20 && x < 60;
      CHECK(s.disparity.at(y, x) == (in_fg ? 10.0 : 0.0));
    }
  }
  const OcclusionMask oracle = occlusion_oracle(s.disparity);
  CHECK(std::equal(oracle.values().begin(), oracle.values().end(), s.occlusion.values().begin()));

  CHECK_THROWS_AS(synth_rds(40, 10, 10, std::nullopt, 1), Error);
  CHECK_THROWS_AS(synth_rds(80, 40, 10, Rect{5, 10, 40, 20}, 1), Error);
}
