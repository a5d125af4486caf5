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

#include "panodepth/evaluation.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace panodepth {
namespace {

using SegmentKey = std::pair<std::int32_t, std::int32_t>;  // class, instance

}  // namespace

PQResult PanopticQuality(const PanopticMap& pred, const PanopticMap& gt) {
  RequireSameShape(pred.semantic, gt.semantic, "panoptic_quality");
  RequireSameShape(pred.instance, gt.instance, "panoptic_quality instances");
  if (!(pred.taxonomy.thing_ids == gt.taxonomy.thing_ids &&
        pred.taxonomy.stuff_ids == gt.taxonomy.stuff_ids &&
        pred.taxonomy.ignore_label == gt.taxonomy.ignore_label)) {
    Fail(ErrorCode::kContractViolation, "panoptic_quality: taxonomy mismatch");
  }
  const Taxonomy& tax = gt.taxonomy;

  auto key_at = [](const PanopticMap& m, std::size_t i) -> SegmentKey {
    const std::int32_t label = m.semantic.data()[i];
    const std::int32_t id =
        m.taxonomy.IsThing(label) ? m.instance.data()[i] : 0;
    return {label, id};
  };

  std::map<SegmentKey, std::int64_t> pred_area, gt_area;
  std::map<std::pair<SegmentKey, SegmentKey>, std::int64_t> intersection;
  for (std::size_t i = 0; i < gt.semantic.size(); ++i) {
    const SegmentKey g = key_at(gt, i);
    if (g.first == tax.ignore_label) continue;
    const SegmentKey p = key_at(pred, i);
    if (tax.IsKnown(g.first)) ++gt_area[g];
    if (tax.IsKnown(p.first)) ++pred_area[p];
    if (tax.IsKnown(g.first) && p.first == g.first) ++intersection[{p, g}];
  }

  PQResult result;
  std::set<SegmentKey> matched_pred, matched_gt;
  for (const auto& [pair, inter] : intersection) {
    const auto& [p, g] = pair;
    const double uni =
        static_cast<double>(pred_area[p] + gt_area[g] - inter);
    const double iou = static_cast<double>(inter) / uni;
    if (iou <= 0.5) continue;
    matched_pred.insert(p);
    matched_gt.insert(g);
    auto& cls = result.per_class[g.first];
    ++cls.tp;
    cls.iou_sum += iou;
  }
  for (const auto& [g, area] : gt_area) {
    auto& cls = result.per_class[g.first];
    if (!matched_gt.count(g)) ++cls.fn;
  }
  for (const auto& [p, area] : pred_area) {
    if (matched_pred.count(p)) continue;
    // False positives only count towards classes present in the ground truth.
    auto it = result.per_class.find(p.first);
    if (it != result.per_class.end()) ++it->second.fp;
  }

  double things = 0.0, stuff = 0.0;
  int n_things = 0, n_stuff = 0;
  for (auto& [label, cls] : result.per_class) {
    const double denom = cls.tp + 0.5 * cls.fp + 0.5 * cls.fn;
    cls.rq = denom > 0.0 ? cls.tp / denom : 0.0;
    cls.sq = cls.tp > 0 ? cls.iou_sum / cls.tp : 0.0;
    cls.pq = denom > 0.0 ? cls.iou_sum / denom : 0.0;
    result.pq += cls.pq;
    result.sq += cls.sq;
    result.rq += cls.rq;
    result.tp += cls.tp;
    result.fp += cls.fp;
    result.fn += cls.fn;
    if (tax.IsThing(label)) {
      things += cls.pq;
      ++n_things;
    } else {
      stuff += cls.pq;
      ++n_stuff;
    }
  }
  const double n = static_cast<double>(result.per_class.size());
  if (n > 0) {
    result.pq /= n;
    result.sq /= n;
    result.rq /= n;
  }
  result.pq_things = n_things > 0 ? things / n_things : 0.0;
  result.pq_stuff = n_stuff > 0 ? stuff / n_stuff : 0.0;
  return result;
}

DepthMetrics ComputeDepthMetrics(const ImageGrid& pred, const ImageGrid& gt,
                                 const ValidMask& valid, double cap) {
  RequireSameShape(pred, gt, "depth_metrics");
  RequireSameShape(pred, valid, "depth_metrics mask", false);
  Require(cap > kMinEvalDepth, "depth_metrics: cap must exceed min depth");
  const double t1 = 1.25, t2 = t1 * t1, t3 = t2 * t1;
  double abs_rel = 0.0, sq = 0.0;
  std::size_t d1 = 0, d2 = 0, d3 = 0, n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double g = gt.data()[i];
    if (!valid.data()[i] || !(g > 0.0) || g > cap) continue;
    const double p = std::clamp(pred.data()[i], kMinEvalDepth, cap);
    abs_rel += std::abs(p - g) / g;
    sq += (p - g) * (p - g);
    const double ratio = std::max(p / g, g / p);
    d1 += ratio < t1;
    d2 += ratio < t2;
    d3 += ratio < t3;
    ++n;
  }
  if (n == 0) Fail(ErrorCode::kDegenerateInput, "depth_metrics: no valid pixels");
  const double inv = 1.0 / static_cast<double>(n);
  return {abs_rel * inv, std::sqrt(sq * inv), d1 * inv, d2 * inv, d3 * inv, n};
}

}  // namespace panodepth
