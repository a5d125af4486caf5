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

#ifndef PANODEPTH_EVALUATION_H_
#define PANODEPTH_EVALUATION_H_

#include <cstdint>
#include <map>

#include "panodepth/grid.h"
#include "panodepth/panoptic_map.h"

namespace panodepth {

struct ClassPQ {
  double pq = 0.0, sq = 0.0, rq = 0.0;
  double iou_sum = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0;
};

struct PQResult {
  std::map<std::int32_t, ClassPQ> per_class;  // Classes present in GT only.
  double pq = 0.0, sq = 0.0, rq = 0.0;
  double pq_things = 0.0, pq_stuff = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0;
};

// Segments are (class, instance) pairs; a prediction matches a ground-truth
// segment of the same class iff IoU > 0.5. Pixels labeled with the ignore
// label in the ground truth are removed from both maps before matching.
// Averages run over the classes present in the ground truth.
PQResult PanopticQuality(const PanopticMap& pred, const PanopticMap& gt);

inline constexpr double kDepthCap = 80.0;
inline constexpr double kMinEvalDepth = 1e-3;

struct DepthMetrics {
  double abs_rel = 0.0;
  double rmse = 0.0;
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  std::size_t count = 0;
};

// Over valid pixels with 0 < gt <= cap; predictions are clamped to
// [kMinEvalDepth, cap]. delta_k counts max(p/g, g/p) < 1.25^k (strict).
DepthMetrics ComputeDepthMetrics(const ImageGrid& pred, const ImageGrid& gt,
                                 const ValidMask& valid,
                                 double cap = kDepthCap);

}  // namespace panodepth

#endif  // PANODEPTH_EVALUATION_H_
