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

// Inference-time panoptic post-processing: keypoint NMS on the center
// heatmap, offset-based grouping of thing pixels, and majority-vote fusion
// with the semantic prediction.

#ifndef PANODEPTH_POSTPROCESS_H_
#define PANODEPTH_POSTPROCESS_H_

#include <cstdint>
#include <vector>

#include "panodepth/grid.h"
#include "panodepth/panoptic_map.h"

namespace panodepth {

inline constexpr int kNmsKernel = 7;
inline constexpr double kNmsThreshold = 0.3;

struct Keypoint {
  int row = 0;
  int col = 0;
  double score = 0.0;

  bool operator==(const Keypoint&) const = default;
};

// Keeps pixels with value >= threshold that equal the maximum of their
// border-truncated kernel x kernel window. Equal-valued survivors within one
// window radius of each other form a plateau; each plateau keeps only its
// lexicographically smallest (row, col). Output is in raster order.
std::vector<Keypoint> KeypointNms(const ImageGrid& heatmap,
                                  int kernel = kNmsKernel,
                                  double threshold = kNmsThreshold);

// Assigns each thing pixel q the id (index + 1) of the keypoint nearest to
// q + offset(q). Ties go to the lower keypoint index. Pixels outside the
// thing mask, or all pixels when there are no keypoints, get 0.
LabelGrid GroupInstances(const std::vector<Keypoint>& keypoints,
                         const ImageGrid& offsets, const ValidMask& thing_mask);

// Each instance takes the most frequent class among its pixels (ties to the
// smaller class id). Thing majorities relabel the instance's thing pixels;
// stuff majorities dissolve the instance. Ids are re-densified in raster
// order of first appearance.
PanopticMap MajorityVoteFusion(const LabelGrid& instance,
                               const LabelGrid& semantic,
                               const Taxonomy& taxonomy);

ValidMask ThingMask(const LabelGrid& semantic, const Taxonomy& taxonomy);

struct PostprocessConfig {
  int nms_kernel = kNmsKernel;
  double nms_threshold = kNmsThreshold;
};

struct PostprocessTimings {
  double nms_ms = 0.0;
  double grouping_ms = 0.0;
  double fusion_ms = 0.0;
  double total_ms() const { return nms_ms + grouping_ms + fusion_ms; }
};

struct PostprocessResult {
  PanopticMap panoptic;
  std::vector<Keypoint> keypoints;
  PostprocessTimings timings;
};

// NMS, grouping of thing pixels (per the semantic prediction), then fusion.
PostprocessResult PostprocessPanoptic(const ImageGrid& heatmap,
                                      const ImageGrid& offsets,
                                      const LabelGrid& semantic,
                                      const Taxonomy& taxonomy,
                                      const PostprocessConfig& cfg = {});

}  // namespace panodepth

#endif  // PANODEPTH_POSTPROCESS_H_
