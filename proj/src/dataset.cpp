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

#include <algorithm>

#include "stereoadapt/dataio.hpp"

namespace stereoadapt {

namespace fs = std::filesystem;

Layout parse_layout(std::string_view name) {
  if (name == "kitti") return Layout::kKitti;
  if (name == "sceneflow") return Layout::kSceneFlow;
  if (name == "middlebury") return Layout::kMiddlebury;
  if (name == "flat-pairs") return Layout::kFlatPairs;
  throw Error("unknown dataset layout '" + std::string(name) + "'");
}

std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::kKitti: return "kitti";
    case Layout::kSceneFlow: return "sceneflow";
    case Layout::kMiddlebury: return "middlebury";
    case Layout::kFlatPairs: return "flat-pairs";
  }
  return "unknown";
}

namespace {

std::vector<fs::path> png_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::optional<fs::path> first_existing(std::initializer_list<fs::path> candidates) {
  for (const auto& p : candidates) {
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

void add_pair(PairListing& out, const fs::path& root, const fs::path& left, const fs::path& right,
              std::optional<fs::path> gt, std::optional<fs::path> sem) {
  if (!fs::is_regular_file(right)) {
    ++out.skipped;
    out.warnings.push_back("missing right view for " + left.string());
    return;
  }
  out.pairs.push_back({left, right, std::move(gt), std::move(sem), fs::relative(left, root)});
}

void list_side_by_side(PairListing& out, const fs::path& root, const char* left_dir, const char* right_dir,
                       const char* gt_dir, const char* sem_dir) {
  for (const fs::path& left : png_files(root / left_dir)) {
    const fs::path name = left.filename();
    fs::path stem = left.stem();
    add_pair(out, root, left, root / right_dir / name,
             first_existing({root / gt_dir / name, root / gt_dir / stem.concat(".pfm")}),
             first_existing({root / sem_dir / name}));
  }
}

bool is_frames_component(const fs::path& component) {
  return component.string().rfind("frames_", 0) == 0;
}

void list_sceneflow(PairListing& out, const fs::path& root) {
  std::vector<fs::path> lefts;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    if (entry.path().parent_path().filename() != "left") continue;
    const fs::path rel = fs::relative(entry.path(), root);
    if (std::any_of(rel.begin(), rel.end(), is_frames_component)) lefts.push_back(entry.path());
  }
  std::sort(lefts.begin(), lefts.end());
  for (const fs::path& left : lefts) {
    const fs::path right = left.parent_path().parent_path() / "right" / left.filename();
    fs::path gt_rel;
    bool replaced = false;
    for (const fs::path& part : fs::relative(left, root)) {
      if (!replaced && is_frames_component(part)) {
        gt_rel /= "disparity";
        replaced = true;
      } else {
        gt_rel /= part;
      }
    }
    gt_rel.replace_extension(".pfm");
    add_pair(out, root, left, right, first_existing({root / gt_rel}), std::nullopt);
  }
}

void list_middlebury(PairListing& out, const fs::path& root) {
  std::vector<fs::path> scenes;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) scenes.push_back(entry.path());
  }
  std::sort(scenes.begin(), scenes.end());
  for (const fs::path& scene : scenes) {
    const fs::path left = scene / "im0.png";
    if (!fs::is_regular_file(left)) continue;
    add_pair(out, root, left, scene / "im1.png", first_existing({scene / "disp0GT.pfm", scene / "disp0.pfm"}),
             std::nullopt);
  }
}

}  // namespace

PairListing list_pairs(const DatasetSpec& spec) {
  if (!fs::is_directory(spec.root)) throw Error("dataset root does not exist: " + spec.root.string());
  PairListing out;
  switch (spec.layout) {
    case Layout::kFlatPairs:
      list_side_by_side(out, spec.root, "left", "right", "disp", "semantic");
      break;
    case Layout::kKitti:
      list_side_by_side(out, spec.root, "image_2", "image_3", "disp_occ_0", "semantic");
      break;
    case Layout::kSceneFlow:
      list_sceneflow(out, spec.root);
      break;
    case Layout::kMiddlebury:
      list_middlebury(out, spec.root);
      break;
  }
  return out;
}

}  // namespace stereoadapt
