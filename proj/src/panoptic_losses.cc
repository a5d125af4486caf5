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

#include "panodepth/panoptic_losses.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace panodepth {

InstanceAnnotation InstanceAnnotation::FromMask(std::int32_t id,
                                                std::int32_t class_id,
                                                ValidMask mask) {
  InstanceAnnotation out;
  out.id = id;
  out.class_id = class_id;
  double sum_r = 0.0, sum_c = 0.0;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (mask(r, c) == 0) continue;
      sum_r += r;
      sum_c += c;
      ++out.area;
    }
  }
  Require(out.area > 0, "instance annotation: empty mask");
  out.center_row = sum_r / static_cast<double>(out.area);
  out.center_col = sum_c / static_cast<double>(out.area);
  out.mask = std::move(mask);
  return out;
}

std::vector<InstanceAnnotation> InstancesFromPanoptic(const PanopticMap& map) {
  RequireSameShape(map.semantic, map.instance, "panoptic semantic vs instance");
  std::map<std::int32_t, std::pair<std::int32_t, ValidMask>> masks;
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const std::int32_t id = map.instance(r, c);
      if (id <= 0) continue;
      auto it = masks.find(id);
      if (it == masks.end()) {
        it = masks
                 .emplace(id, std::make_pair(map.semantic(r, c),
                                             MakeMask(map.height(),
                                                      map.width(), false)))
                 .first;
      }
      it->second.second(r, c) = 1;
    }
  }
  std::vector<InstanceAnnotation> out;
  out.reserve(masks.size());
  for (auto& [id, entry] : masks) {
    out.push_back(
        InstanceAnnotation::FromMask(id, entry.first, std::move(entry.second)));
  }
  return out;
}

void BootstrapConfig::Validate() const {
  Require(top_fraction > 0.0 && top_fraction <= 1.0,
          "bootstrap: top_fraction must be in (0, 1]");
  Require(small_weight > 0.0, "bootstrap: small_weight must be positive");
}

ImageGrid RenderCenterHeatmap(const std::vector<InstanceAnnotation>& instances,
                              double sigma, int height, int width) {
  Require(sigma > 0.0, "render_center_heatmap: sigma must be positive");
  ImageGrid out(height, width, 1, 0.0, GridRole::kHeatmap);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> row_factor(height), col_factor(width);
  for (const auto& inst : instances) {
    // The Gaussian is separable: exp(-(dr^2 + dc^2) k) = exp(-dr^2 k) exp(-dc^2 k).
    for (int r = 0; r < height; ++r) {
      const double d = r - inst.center_row;
      row_factor[r] = std::exp(-d * d * inv);
    }
    for (int c = 0; c < width; ++c) {
      const double d = c - inst.center_col;
      col_factor[c] = std::exp(-d * d * inv);
    }
    for (int r = 0; r < height; ++r) {
      double* row = &out(r, 0);
      const double fr = row_factor[r];
      for (int c = 0; c < width; ++c) {
        row[c] = std::max(row[c], fr * col_factor[c]);
      }
    }
  }
  return out;
}

OffsetTargets ComputeOffsets(const std::vector<InstanceAnnotation>& instances,
                             int height, int width) {
  OffsetTargets out{ImageGrid(height, width, 2, 0.0, GridRole::kOffset),
                    MakeMask(height, width, false)};
  for (const auto& inst : instances) {
    Require(inst.mask.height() == height && inst.mask.width() == width,
            "compute_offsets: instance mask shape mismatch");
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        if (inst.mask(r, c) == 0) continue;
        Require(out.thing_mask(r, c) == 0,
                "compute_offsets: overlapping instance masks");
        out.thing_mask(r, c) = 1;
        out.offsets(r, c, 0) = inst.center_row - r;
        out.offsets(r, c, 1) = inst.center_col - c;
      }
    }
  }
  return out;
}

ImageGrid PixelWeights(const std::vector<InstanceAnnotation>& instances,
                       int height, int width, const BootstrapConfig& cfg) {
  ImageGrid out(height, width, 1, 1.0);
  for (const auto& inst : instances) {
    if (inst.area >= cfg.small_area_threshold) continue;
    for (std::size_t i = 0; i < inst.mask.size(); ++i) {
      if (inst.mask.data()[i] != 0) out.data()[i] = cfg.small_weight;
    }
  }
  return out;
}

PanopticTargets BuildPanopticTargets(const PanopticMap& map,
                                     const BootstrapConfig& cfg, double sigma) {
  const auto instances = InstancesFromPanoptic(map);
  OffsetTargets offsets = ComputeOffsets(instances, map.height(), map.width());
  return {map.semantic,
          RenderCenterHeatmap(instances, sigma, map.height(), map.width()),
          std::move(offsets.offsets), std::move(offsets.thing_mask),
          PixelWeights(instances, map.height(), map.width(), cfg)};
}

template <LossScalar T>
T BootstrappedCrossEntropy(const Grid<T>& probabilities,
                           const LabelGrid& targets, const ImageGrid& weights,
                           const BootstrapConfig& cfg) {
  cfg.Validate();
  RequireSameShape(probabilities, targets, "bootstrapped_ce targets", false);
  RequireSameShape(probabilities, weights, "bootstrapped_ce weights", false);
  const int num_classes = probabilities.channels();
  const std::size_t n = targets.size();

  std::vector<T> losses;
  losses.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t y = targets.data()[i];
    if (y == cfg.ignore_label) continue;
    Require(y >= 0 && y < num_classes, "bootstrapped_ce: target out of range");
    const T* p = probabilities.data().data() + i * num_classes;
    double sum = 0.0;
    for (int k = 0; k < num_classes; ++k) {
      Require(ValueOf(p[k]) >= 0.0, "bootstrapped_ce: negative probability");
      sum += ValueOf(p[k]);
    }
    Require(ValueOf(p[y]) > 0.0,
            "bootstrapped_ce: zero probability on the target class");
    Require(std::abs(sum - 1.0) <= 1e-6,
            "bootstrapped_ce: probabilities do not sum to 1");
    losses.push_back(weights.data()[i] * -log(p[y]));
  }
  if (losses.empty()) {
    Fail(ErrorCode::kDegenerateInput, "bootstrapped_ce: no valid pixels");
  }

  // The guard absorbs products such as 0.15 * 20 = 3.0000000000000004.
  const double target_k = cfg.top_fraction * static_cast<double>(losses.size());
  std::size_t k = static_cast<std::size_t>(std::ceil(target_k - 1e-9));
  k = std::clamp<std::size_t>(k, 1, losses.size());

  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return ValueOf(losses[a]) > ValueOf(losses[b]);
                   });
  T sum(0.0);
  for (std::size_t i = 0; i < k; ++i) sum += losses[order[i]];
  return sum / static_cast<double>(k);
}

template <LossScalar T>
T HeatmapMse(const Grid<T>& pred, const ImageGrid& target) {
  RequireSameShape(pred, target, "heatmap_mse");
  Require(!pred.empty(), "heatmap_mse: empty grid");
  T sum(0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const T d = pred.data()[i] - target.data()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.size());
}

template <LossScalar T>
T OffsetL1(const Grid<T>& pred, const ImageGrid& target,
           const ValidMask& thing_mask) {
  RequireSameShape(pred, target, "offset_l1");
  RequireSameShape(pred, thing_mask, "offset_l1 mask", false);
  Require(pred.channels() == 2, "offset_l1: offsets need 2 channels");
  T sum(0.0);
  std::size_t count = 0;
  for (int r = 0; r < pred.height(); ++r) {
    for (int c = 0; c < pred.width(); ++c) {
      if (thing_mask(r, c) == 0) continue;
      sum += abs(pred(r, c, 0) - target(r, c, 0)) +
             abs(pred(r, c, 1) - target(r, c, 1));
      ++count;
    }
  }
  if (count == 0) return T(0.0);
  return sum / static_cast<double>(count);
}

#define PANODEPTH_INSTANTIATE_PANOPTIC_LOSSES(T)                      \
  template T BootstrappedCrossEntropy(const Grid<T>&, const LabelGrid&, \
                                      const ImageGrid&,                 \
                                      const BootstrapConfig&);          \
  template T HeatmapMse(const Grid<T>&, const ImageGrid&);              \
  template T OffsetL1(const Grid<T>&, const ImageGrid&, const ValidMask&);

PANODEPTH_INSTANTIATE_PANOPTIC_LOSSES(double)
PANODEPTH_INSTANTIATE_PANOPTIC_LOSSES(Dual)

#undef PANODEPTH_INSTANTIATE_PANOPTIC_LOSSES

}  // namespace panodepth
