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

#include "panodepth/geometric_scaling.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

namespace panodepth {

NormalGrid SurfaceNormals(const PointGrid<double>& points,
                          const Point3<double>& ideal) {
  const int h = points.height();
  const int w = points.width();
  NormalGrid out{Grid<Point3<double>>(h, w), MakeMask(h, w, false)};
  for (int v = 1; v + 1 < h; ++v) {
    for (int u = 1; u + 1 < w; ++u) {
      if (!points.valid(v, u) || !points.valid(v, u - 1) ||
          !points.valid(v, u + 1) || !points.valid(v - 1, u) ||
          !points.valid(v + 1, u)) {
        continue;
      }
      const Point3<double> t_u = points.points(v, u + 1) - points.points(v, u - 1);
      const Point3<double> t_v = points.points(v + 1, u) - points.points(v - 1, u);
      Point3<double> n = Cross(t_v, t_u);
      const double norm = std::sqrt(Dot(n, n));
      if (!(norm >= 1e-12)) continue;
      n = (1.0 / norm) * n;
      if (Dot(n, ideal) < 0.0) n = -1.0 * n;
      out.normals(v, u) = n;
      out.valid(v, u) = 1;
    }
  }
  return out;
}

ValidMask GroundMask(const PanopticMap& panoptic) {
  if (!panoptic.taxonomy.road_id) {
    Fail(ErrorCode::kContractViolation, "ground_mask: taxonomy has no road id");
  }
  const std::int32_t road = *panoptic.taxonomy.road_id;
  ValidMask mask = MakeMask(panoptic.height(), panoptic.width(), false);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask.data()[i] = panoptic.semantic.data()[i] == road;
  }
  return mask;
}

std::vector<double> CameraHeights(const PointGrid<double>& points,
                                  const NormalGrid& normals,
                                  const ValidMask& ground) {
  RequireSameShape(points.points, ground, "camera_heights ground mask", false);
  RequireSameShape(points.points, normals.normals, "camera_heights normals",
                   false);
  std::vector<double> heights;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (!ground.data()[i] || !normals.valid.data()[i] || !points.valid.data()[i])
      continue;
    heights.push_back(Dot(normals.normals.data()[i], points.points.data()[i]));
  }
  return heights;
}

std::vector<double> CameraHeightsIdealNormal(const PointGrid<double>& points,
                                             const ValidMask& ground,
                                             const Point3<double>& ideal) {
  RequireSameShape(points.points, ground, "camera_heights ground mask", false);
  std::vector<double> heights;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (!ground.data()[i] || !points.valid.data()[i]) continue;
    heights.push_back(Dot(ideal, points.points.data()[i]));
  }
  return heights;
}

double Median(std::vector<double> values) {
  if (values.empty()) {
    Fail(ErrorCode::kScaleUnavailable, "median of an empty set");
  }
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double ScaleFactor(const CameraRig& rig, const std::vector<double>& heights) {
  Require(rig.height_m > 0.0, "scale_factor: camera height must be positive");
  if (heights.empty()) {
    Fail(ErrorCode::kScaleUnavailable, "scale unavailable: no ground points");
  }
  const double median = Median(heights);
  if (!(median > 0.0)) {
    Fail(ErrorCode::kScaleUnavailable,
         "scale unavailable: non-positive median camera height");
  }
  return rig.height_m / median;
}

ImageGrid ScaleDepth(const ImageGrid& relative_depth, double factor) {
  Require(factor > 0.0 && std::isfinite(factor),
          "scale_depth: factor must be positive");
  ImageGrid out = relative_depth;
  out.set_role(GridRole::kDepth);
  for (auto& d : out.data()) d *= factor;
  return out;
}

ScaleEstimate EstimateScale(const ImageGrid& relative_depth,
                            const PanopticMap& panoptic, const Intrinsics& k,
                            const CameraRig& rig, const ScaleOptions& options) {
  RequireSameShape(relative_depth, panoptic.semantic, "estimate_scale", false);
  const PointGrid<double> points = Backproject(relative_depth, k);
  const NormalGrid normals = SurfaceNormals(points, rig.ground_normal);

  ValidMask ground;
  if (options.selection == GroundSelection::kPanopticRoad) {
    ground = GroundMask(panoptic);
  } else {
    const double min_cos =
        std::cos(options.normal_cone_deg * std::numbers::pi / 180.0);
    ground = MakeMask(points.height(), points.width(), false);
    for (std::size_t i = 0; i < ground.size(); ++i) {
      ground.data()[i] = normals.valid.data()[i] &&
                         Dot(normals.normals.data()[i], rig.ground_normal) >= min_cos;
    }
  }

  const std::vector<double> heights =
      options.normal_source == NormalSource::kEstimated
          ? CameraHeights(points, normals, ground)
          : CameraHeightsIdealNormal(points, ground, rig.ground_normal);
  ScaleEstimate est;
  est.factor = ScaleFactor(rig, heights);
  est.median_height = rig.height_m / est.factor;
  est.ground_points = heights.size();
  return est;
}

LabeledPointCloud ProjectLabeled(const PanopticMap& panoptic,
                                 const ImageGrid& absolute_depth,
                                 const Intrinsics& k,
                                 const std::set<std::int32_t>& excluded) {
  RequireSameShape(absolute_depth, panoptic.semantic, "project_labeled", false);
  RequireSameShape(panoptic.semantic, panoptic.instance, "project_labeled");
  const PointGrid<double> points = Backproject(absolute_depth, k);
  LabeledPointCloud cloud;
  for (std::size_t i = 0; i < panoptic.semantic.size(); ++i) {
    const std::int32_t label = panoptic.semantic.data()[i];
    if (excluded.count(label) || !points.valid.data()[i] ||
        !std::isfinite(absolute_depth.data()[i])) {
      continue;
    }
    const auto& p = points.points.data()[i];
    cloud.points.push_back({p.x, p.y, p.z, label, panoptic.instance.data()[i]});
  }
  return cloud;
}

std::set<std::int32_t> DefaultExcludedClasses(const Taxonomy& taxonomy) {
  std::set<std::int32_t> out;
  if (taxonomy.sky_id) out.insert(*taxonomy.sky_id);
  if (taxonomy.ego_car_id) out.insert(*taxonomy.ego_car_id);
  return out;
}

void WritePly(std::ostream& os, const LabeledPointCloud& cloud,
              const PlyMetadata& meta) {
  char buf[160];
  os << "ply\nformat ascii 1.0\n";
  std::snprintf(buf, sizeof(buf), "comment scale_factor %.17g\n",
                meta.scale_factor);
  os << buf;
  std::snprintf(buf, sizeof(buf), "comment camera_height_m %.17g\n",
                meta.camera_height_m);
  os << buf;
  os << "element vertex " << cloud.points.size() << "\n"
     << "property float x\nproperty float y\nproperty float z\n"
     << "property ushort class_id\nproperty ushort instance_id\n"
     << "end_header\n";
  for (const auto& p : cloud.points) {
    Require(p.class_id >= 0 && p.class_id <= 65535 && p.instance_id >= 0 &&
                p.instance_id <= 65535,
            "write_ply: ids must fit in ushort");
    std::snprintf(buf, sizeof(buf), "%.7g %.7g %.7g %d %d\n",
                  static_cast<float>(p.x), static_cast<float>(p.y),
                  static_cast<float>(p.z), p.class_id, p.instance_id);
    os << buf;
  }
}

void WritePly(const std::string& path, const LabeledPointCloud& cloud,
              const PlyMetadata& meta) {
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorCode::kIo, "cannot open for writing: " + path);
  WritePly(os, cloud, meta);
  if (!os) Fail(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace panodepth
