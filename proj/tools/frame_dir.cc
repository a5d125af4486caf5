// Copyright 2026 The Panodepth Authors.
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
#include "frame_dir.h"

#include "panodepth/error.h"
#include "panodepth/image_io.h"
#include "panodepth/serialization.h"

namespace panodepth::cli {

std::string FrameDir::Path(const std::string& name) const {
  return (root_ / name).string();
}

bool FrameDir::Has(const std::string& name) const {
  return fs::is_regular_file(root_ / name);
}

void FrameDir::RequireFiles(std::initializer_list<std::string> names) const {
  if (!fs::is_directory(root_))
    Fail(ErrorCode::kIo, "not a directory: " + root_.string());
  for (const auto& name : names) {
    if (!Has(name)) Fail(ErrorCode::kIo, "missing input file: " + Path(name));
  }
}

ImageGrid FrameDir::Image(const std::string& name) const {
  return ReadPnm8(Path(name));
}

ImageGrid FrameDir::Depth(const std::string& name) const {
  ImageGrid d = ReadPfm(Path(name));
  if (d.channels() != 1) Fail(ErrorCode::kIo, "expected 1 channel: " + Path(name));
  d.set_role(GridRole::kDepth);
  return d;
}

ImageGrid FrameDir::Offsets() const { return ReadPfm2(Path(kOffsets)); }

LabelGrid FrameDir::Labels(const std::string& name) const {
  return ReadPgm16(Path(name));
}

Taxonomy FrameDir::ReadTaxonomy() const {
  Taxonomy t = ParseJson<Taxonomy>(ReadJsonFile(Path(kTaxonomy)), "taxonomy");
  t.Validate();
  return t;
}

Intrinsics FrameDir::ReadIntrinsics() const {
  Intrinsics k =
      ParseJson<Intrinsics>(ReadJsonFile(Path(kIntrinsics)), "intrinsics");
  k.Validate();
  return k;
}

CameraRig FrameDir::ReadRig() const {
  const Json j = ReadJsonFile(Path(kRig));
  CameraRig rig;
  try {
    rig.height_m = j.at("camera_height").get<double>();
    if (j.contains("ground_normal")) {
      const auto n = j.at("ground_normal").get<std::vector<double>>();
      if (n.size() != 3) Fail(ErrorCode::kIo, "ground_normal needs 3 values");
      rig.ground_normal = {n[0], n[1], n[2]};
    }
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kIo, std::string("malformed rig: ") + e.what());
  }
  return rig;
}

PanopticMap FrameDir::Panoptic() const {
  PanopticMap map{Labels(kSemantic), Labels(kInstance), ReadTaxonomy()};
  RequireSameShape(map.semantic, map.instance, "semantic vs instance");
  map.Validate();
  return map;
}

void FrameDir::WritePanoptic(const PanopticMap& map) const {
  WritePgm16(Path(kSemantic), map.semantic);
  WritePgm16(Path(kInstance), map.instance);
  WriteJsonFile(Path(kTaxonomy), map.taxonomy);
}

FrameDir OutputDir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path))
    Fail(ErrorCode::kIo, "cannot create output directory: " + path);
  return FrameDir(path);
}

}  // namespace panodepth::cli
