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
// Frame directories: the file layout shared by the CLI subcommands.

#ifndef PANODEPTH_TOOLS_FRAME_DIR_H_
#define PANODEPTH_TOOLS_FRAME_DIR_H_

#include <filesystem>
#include <string>

#include "panodepth/camera.h"
#include "panodepth/geometric_scaling.h"
#include "panodepth/grid.h"
#include "panodepth/panoptic_map.h"

namespace panodepth::cli {

namespace fs = std::filesystem;

// File names inside a frame directory.
inline constexpr char kImage[] = "image.pgm";
inline constexpr char kPrev[] = "prev.pgm";
inline constexpr char kNext[] = "next.pgm";
inline constexpr char kDepth[] = "depth.pfm";
inline constexpr char kRelativeDepth[] = "relative_depth.pfm";
inline constexpr char kSemantic[] = "semantic.pgm";
inline constexpr char kInstance[] = "instance.pgm";
inline constexpr char kHeatmap[] = "heatmap.pfm";
inline constexpr char kOffsets[] = "offsets.pfm";
inline constexpr char kTaxonomy[] = "taxonomy.json";
inline constexpr char kIntrinsics[] = "intrinsics.json";
inline constexpr char kRig[] = "rig.json";
inline constexpr char kPoses[] = "poses.json";
inline constexpr char kCloud[] = "cloud.ply";
inline constexpr char kReport[] = "report.json";

class FrameDir {
 public:
  explicit FrameDir(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }
  std::string Path(const std::string& name) const;
  bool Has(const std::string& name) const;

  // Throws kIo naming the first missing file.
  void RequireFiles(std::initializer_list<std::string> names) const;

  ImageGrid Image(const std::string& name) const;  // PGM/PPM, [0, 1].
  ImageGrid Depth(const std::string& name) const;  // PFM, 1 channel.
  ImageGrid Offsets() const;                       // PFM, 2 channels.
  LabelGrid Labels(const std::string& name) const;
  Taxonomy ReadTaxonomy() const;
  Intrinsics ReadIntrinsics() const;
  CameraRig ReadRig() const;

  // semantic.pgm + instance.pgm + taxonomy.json.
  PanopticMap Panoptic() const;

  void WritePanoptic(const PanopticMap& map) const;

 private:
  fs::path root_;
};

// Creates the directory (and parents) when missing.
FrameDir OutputDir(const std::string& path);

}  // namespace panodepth::cli

#endif  // PANODEPTH_TOOLS_FRAME_DIR_H_
