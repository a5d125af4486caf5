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

#include "panodepth/postprocess.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace panodepth {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index becomes the root.
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Buckets keypoints per square cell of the image so a pixel target only
// scans keypoints that can possibly be its nearest one.
class KeypointCells {
 public:
  static constexpr int kCellSize = 32;

  KeypointCells(const std::vector<Keypoint>& keypoints, int height, int width)
      : height_(height), width_(width) {
    rows_ = (height + kCellSize - 1) / kCellSize;
    cols_ = (width + kCellSize - 1) / kCellSize;
    start_.reserve(static_cast<std::size_t>(rows_) * cols_ + 1);
    start_.push_back(0);
    for (int cr = 0; cr < rows_; ++cr) {
      for (int cc = 0; cc < cols_; ++cc) {
        const double r0 = cr * kCellSize, r1 = r0 + kCellSize;
        const double c0 = cc * kCellSize, c1 = c0 + kCellSize;
        double bound = std::numeric_limits<double>::infinity();
        for (const auto& k : keypoints) {
          const double fr = std::max(std::abs(k.row - r0), std::abs(k.row - r1));
          const double fc = std::max(std::abs(k.col - c0), std::abs(k.col - c1));
          bound = std::min(bound, fr * fr + fc * fc);
        }
        // Margin keeps rounding from pruning a keypoint that ties the best.
        bound = bound * (1.0 + 1e-9) + 1e-9;
        for (std::size_t i = 0; i < keypoints.size(); ++i) {
          const auto& k = keypoints[i];
          const double dr = std::max({r0 - k.row, 0.0, k.row - r1});
          const double dc = std::max({c0 - k.col, 0.0, k.col - c1});
          if (dr * dr + dc * dc <= bound) {
            candidates_.push_back(static_cast<std::int32_t>(i));
          }
        }
        start_.push_back(candidates_.size());
      }
    }
  }

  // Null when the target lies outside the bucketed area.
  std::pair<const std::int32_t*, const std::int32_t*> Lookup(double row,
                                                             double col) const {
    if (!(row >= 0.0 && row < height_ && col >= 0.0 && col < width_)) {
      return {nullptr, nullptr};
    }
    const int cr = static_cast<int>(row) / kCellSize;
    const int cc = static_cast<int>(col) / kCellSize;
    const std::size_t cell = static_cast<std::size_t>(cr) * cols_ + cc;
    return {candidates_.data() + start_[cell],
            candidates_.data() + start_[cell + 1]};
  }

 private:
  int height_, width_, rows_ = 0, cols_ = 0;
  std::vector<std::size_t> start_;
  std::vector<std::int32_t> candidates_;
};

double ElapsedMs(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

std::vector<Keypoint> KeypointNms(const ImageGrid& heatmap, int kernel,
                                  double threshold) {
  Require(kernel >= 1 && kernel % 2 == 1, "keypoint_nms: kernel must be odd");
  Require(heatmap.channels() == 1, "keypoint_nms: heatmap must be 1 channel");
  const int h = heatmap.height();
  const int w = heatmap.width();
  const int radius = kernel / 2;

  std::vector<Keypoint> candidates;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double value = heatmap(r, c);
      if (!(value >= threshold)) continue;
      bool is_max = true;
      const int r_lo = std::max(r - radius, 0), r_hi = std::min(r + radius, h - 1);
      const int c_lo = std::max(c - radius, 0), c_hi = std::min(c + radius, w - 1);
      for (int rr = r_lo; rr <= r_hi && is_max; ++rr) {
        for (int cc = c_lo; cc <= c_hi; ++cc) {
          if (heatmap(rr, cc) > value) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({r, c, value});
    }
  }
  if (candidates.size() < 2) return candidates;

  // Two window maxima within one radius of each other are necessarily equal.
  Grid<std::int32_t> index(h, w, 1, -1);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    index(candidates[i].row, candidates[i].col) = static_cast<std::int32_t>(i);
  }
  DisjointSets plateaus(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& k = candidates[i];
    const int r_lo = std::max(k.row - radius, 0), r_hi = std::min(k.row + radius, h - 1);
    const int c_lo = std::max(k.col - radius, 0), c_hi = std::min(k.col + radius, w - 1);
    for (int rr = r_lo; rr <= r_hi; ++rr) {
      for (int cc = c_lo; cc <= c_hi; ++cc) {
        const std::int32_t j = index(rr, cc);
        if (j >= 0) plateaus.Union(i, static_cast<std::size_t>(j));
      }
    }
  }
  // Candidates are in raster order, so each root is its plateau's smallest.
  std::vector<Keypoint> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (plateaus.Find(i) == i) out.push_back(candidates[i]);
  }
  return out;
}

LabelGrid GroupInstances(const std::vector<Keypoint>& keypoints,
                         const ImageGrid& offsets, const ValidMask& thing_mask) {
  Require(offsets.channels() == 2, "group_instances: offsets need 2 channels");
  RequireSameShape(offsets, thing_mask, "group_instances mask", false);
  const int h = offsets.height();
  const int w = offsets.width();
  LabelGrid out(h, w, 1, 0, GridRole::kLabel);
  if (keypoints.empty()) return out;

  const std::size_t n = keypoints.size();
  std::vector<double> krow(n), kcol(n);
  for (std::size_t i = 0; i < n; ++i) {
    krow[i] = keypoints[i].row;
    kcol[i] = keypoints[i].col;
  }
  const KeypointCells cells(keypoints, h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (thing_mask(r, c) == 0) continue;
      const double tr = r + offsets(r, c, 0);
      const double tc = c + offsets(r, c, 1);
      double best = std::numeric_limits<double>::infinity();
      std::int32_t best_index = 0;
      auto visit = [&](std::size_t i) {
        const double dr = tr - krow[i];
        const double dc = tc - kcol[i];
        const double d = dr * dr + dc * dc;
        if (d < best) {
          best = d;
          best_index = static_cast<std::int32_t>(i);
        }
      };
      const auto [begin, end] = cells.Lookup(tr, tc);
      if (begin != nullptr) {
        for (const std::int32_t* it = begin; it != end; ++it) visit(*it);
      } else {
        for (std::size_t i = 0; i < n; ++i) visit(i);
      }
      out(r, c) = best_index + 1;
    }
  }
  return out;
}

PanopticMap MajorityVoteFusion(const LabelGrid& instance,
                               const LabelGrid& semantic,
                               const Taxonomy& taxonomy) {
  RequireSameShape(instance, semantic, "majority_vote_fusion");
  const std::int32_t num_classes = taxonomy.NumClasses();

  // Compact instance ids to 0..M-1 in first-appearance order.
  std::unordered_map<std::int32_t, std::size_t> slot_of;
  std::vector<std::size_t> slots(instance.size(), SIZE_MAX);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const std::int32_t id = instance.data()[i];
    if (id <= 0) continue;
    slots[i] = slot_of.try_emplace(id, slot_of.size()).first->second;
  }
  const std::size_t m = slot_of.size();
  std::vector<std::int64_t> counts(m * num_classes, 0);
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (slots[i] == SIZE_MAX) continue;
    const std::int32_t label = semantic.data()[i];
    if (label < 0 || label >= num_classes || !taxonomy.IsKnown(label)) continue;
    ++counts[slots[i] * num_classes + label];
  }
  // -1 marks a dissolved instance.
  std::vector<std::int32_t> majority(m, -1);
  for (std::size_t s = 0; s < m; ++s) {
    std::int64_t best = 0;
    std::int32_t label = -1;
    for (std::int32_t k = 0; k < num_classes; ++k) {
      if (counts[s * num_classes + k] > best) {
        best = counts[s * num_classes + k];
        label = k;
      }
    }
    if (label >= 0 && taxonomy.IsThing(label)) majority[s] = label;
  }

  PanopticMap out{semantic, LabelGrid(instance.height(), instance.width(), 1, 0,
                                      GridRole::kLabel),
                  taxonomy};
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (slots[i] == SIZE_MAX) continue;
    const std::int32_t label = majority[slots[i]];
    if (label < 0 || !taxonomy.IsThing(semantic.data()[i])) continue;
    out.semantic.data()[i] = label;
    out.instance.data()[i] = static_cast<std::int32_t>(slots[i]) + 1;
  }
  CanonicalizeInstanceIds(out.instance);
  return out;
}

ValidMask ThingMask(const LabelGrid& semantic, const Taxonomy& taxonomy) {
  ValidMask mask = MakeMask(semantic.height(), semantic.width(), false);
  const std::int32_t num_classes = taxonomy.NumClasses();
  std::vector<std::uint8_t> is_thing(num_classes, 0);
  for (auto id : taxonomy.thing_ids) is_thing[id] = 1;
  for (std::size_t i = 0; i < semantic.size(); ++i) {
    const std::int32_t label = semantic.data()[i];
    mask.data()[i] = label >= 0 && label < num_classes && is_thing[label];
  }
  return mask;
}

PostprocessResult PostprocessPanoptic(const ImageGrid& heatmap,
                                      const ImageGrid& offsets,
                                      const LabelGrid& semantic,
                                      const Taxonomy& taxonomy,
                                      const PostprocessConfig& cfg) {
  RequireSameShape(heatmap, semantic, "postprocess heatmap vs semantic");
  PostprocessResult result;
  auto start = std::chrono::steady_clock::now();
  result.keypoints = KeypointNms(heatmap, cfg.nms_kernel, cfg.nms_threshold);
  result.timings.nms_ms = ElapsedMs(start);

  start = std::chrono::steady_clock::now();
  const LabelGrid grouped =
      GroupInstances(result.keypoints, offsets, ThingMask(semantic, taxonomy));
  result.timings.grouping_ms = ElapsedMs(start);

  start = std::chrono::steady_clock::now();
  result.panoptic = MajorityVoteFusion(grouped, semantic, taxonomy);
  result.timings.fusion_ms = ElapsedMs(start);
  return result;
}

}  // namespace panodepth
