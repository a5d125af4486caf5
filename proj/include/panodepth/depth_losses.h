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

// Self-supervised depth objective: SSIM, photometric error, minimum
// reprojection with auto-masking, multi-scale masking, edge-aware smoothness.

#ifndef PANODEPTH_DEPTH_LOSSES_H_
#define PANODEPTH_DEPTH_LOSSES_H_

#include <optional>
#include <vector>

#include "panodepth/dual.h"
#include "panodepth/grid.h"

namespace panodepth {

struct PhotometricConfig {
  double alpha = 0.85;
  int ssim_window = 3;
  double c1 = 1e-4;
  double c2 = 9e-4;

  void Validate() const;
};

// Weight of the smoothness term inside the depth loss.
inline constexpr double kSmoothnessWeight = 0.001;

inline constexpr double kDefaultMinDepth = 0.1;
inline constexpr double kDefaultMaxDepth = 100.0;

template <typename T>
struct WarpedFrame {
  Grid<T> image;
  ValidMask valid;
};

// Candidates for the per-pixel minimum: warped context frames contribute only
// where their warp mask is set; unwarped context frames everywhere.
template <typename T>
struct ReprojectionSet {
  Grid<T> target;
  std::vector<WarpedFrame<T>> warped;
  std::vector<Grid<T>> context;
  std::optional<ValidMask> excluded;  // Set bits are removed from the loss.
};

template <typename T>
struct MinReprojection {
  Grid<T> error;
  ValidMask valid;
};

// Full-resolution depth maps, scale 0 first.
template <typename T>
using MultiScaleDepth = std::vector<Grid<T>>;

// Per-pixel, per-channel SSIM from window means with reflected borders.
template <LossScalar T>
Grid<T> SsimMap(const Grid<T>& a, const Grid<T>& b,
                const PhotometricConfig& cfg);

// alpha * (1 - SSIM) / 2 + (1 - alpha) * |a - b|, averaged over channels.
template <LossScalar T>
Grid<T> PhotometricError(const Grid<T>& target, const Grid<T>& candidate,
                         const PhotometricConfig& cfg);

template <LossScalar T>
MinReprojection<T> MinReprojectionError(const ReprojectionSet<T>& set,
                                        const PhotometricConfig& cfg);

// Sum over scales of the mean minimum-reprojection error over valid pixels.
template <LossScalar T>
T MaskedPhotometricLoss(const std::vector<ReprojectionSet<T>>& per_scale,
                        const PhotometricConfig& cfg);

// Edge-aware smoothness of mean-normalized inverse depth, weighted 1/2^i.
template <LossScalar T>
T SmoothnessLoss(const MultiScaleDepth<T>& depth, const ImageGrid& image);

template <LossScalar T>
T DepthLoss(const std::vector<ReprojectionSet<T>>& per_scale,
            const MultiScaleDepth<T>& depth, const ImageGrid& image,
            const PhotometricConfig& cfg);

// Sigmoid logits to depth through a disparity bounded by the depth range.
template <LossScalar T>
Grid<T> SigmoidToDepth(const Grid<T>& logits, double min_depth = kDefaultMinDepth,
                       double max_depth = kDefaultMaxDepth);

}  // namespace panodepth

#endif  // PANODEPTH_DEPTH_LOSSES_H_
