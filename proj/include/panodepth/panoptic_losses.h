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

// Panoptic training targets (center heatmap, offsets, pixel weights) and the
// three panoptic loss terms.

#ifndef PANODEPTH_PANOPTIC_LOSSES_H_
#define PANODEPTH_PANOPTIC_LOSSES_H_

#include <cstdint>
#include <vector>

#include "panodepth/dual.h"
#include "panodepth/grid.h"
#include "panodepth/panoptic_map.h"

namespace panodepth {

inline constexpr double kCenterSigma = 8.0;
inline constexpr double kMseWeight = 200.0;
inline constexpr double kOffsetWeight = 0.01;

struct InstanceAnnotation {
  std::int32_t id = 0;
  std::int32_t class_id = 0;
  ValidMask mask;
  double center_row = 0.0;  // Center of mass, sub-pixel.
  double center_col = 0.0;
  std::size_t area = 0;

  // Throws if the mask is empty.
  static InstanceAnnotation FromMask(std::int32_t id, std::int32_t class_id,
                                     ValidMask mask);
};

// One annotation per positive instance id, ordered by id.
std::vector<InstanceAnnotation> InstancesFromPanoptic(const PanopticMap& map);

struct BootstrapConfig {
  double top_fraction = 0.15;
  std::size_t small_area_threshold = 64 * 64;
  double small_weight = 3.0;
  std::int32_t ignore_label = 255;

  void Validate() const;
};

struct OffsetTargets {
  ImageGrid offsets;  // 2 channels: d_row, d_col towards the own center.
  ValidMask thing_mask;
};

struct PanopticTargets {
  LabelGrid semantic;
  ImageGrid heatmap;
  ImageGrid offsets;
  ValidMask thing_mask;
  ImageGrid weights;
};

// Pointwise max over instances of an isotropic Gaussian at each center.
ImageGrid RenderCenterHeatmap(const std::vector<InstanceAnnotation>& instances,
                              double sigma, int height, int width);

// Throws on overlapping instance masks.
OffsetTargets ComputeOffsets(const std::vector<InstanceAnnotation>& instances,
                             int height, int width);

// small_weight on pixels of instances with area strictly below the threshold.
ImageGrid PixelWeights(const std::vector<InstanceAnnotation>& instances,
                       int height, int width, const BootstrapConfig& cfg);

PanopticTargets BuildPanopticTargets(const PanopticMap& map,
                                     const BootstrapConfig& cfg,
                                     double sigma = kCenterSigma);

// Weighted cross entropy over the K highest-loss pixels, divided by K, with
// K = ceil(top_fraction * N_valid). Ties keep the lower pixel index. The
// selection is held fixed under differentiation.
template <LossScalar T>
T BootstrappedCrossEntropy(const Grid<T>& probabilities,
                           const LabelGrid& targets, const ImageGrid& weights,
                           const BootstrapConfig& cfg);

template <LossScalar T>
T HeatmapMse(const Grid<T>& pred, const ImageGrid& target);

// Mean over thing pixels of |d_row error| + |d_col error|; 0 without things.
template <LossScalar T>
T OffsetL1(const Grid<T>& pred, const ImageGrid& target,
           const ValidMask& thing_mask);

template <LossScalar T>
T PanopticLoss(const T& seg, const T& mse, const T& l1) {
  return seg + kMseWeight * mse + kOffsetWeight * l1;
}

}  // namespace panodepth

#endif  // PANODEPTH_PANOPTIC_LOSSES_H_
