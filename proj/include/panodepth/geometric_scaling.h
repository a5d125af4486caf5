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

// Metric depth scaling from the known camera height: per-ground-point height
// estimates are compared with the mounted height, with ground points chosen by
// the panoptic road class. Also builds the labeled 3D point cloud.

#ifndef PANODEPTH_GEOMETRIC_SCALING_H_
#define PANODEPTH_GEOMETRIC_SCALING_H_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "panodepth/camera.h"
#include "panodepth/grid.h"
#include "panodepth/panoptic_map.h"

namespace panodepth {

struct CameraRig {
  double height_m = 1.5;
  // Ideal ground normal in the camera frame (y points down towards ground).
  Point3<double> ground_normal{0.0, 1.0, 0.0};
};

struct NormalGrid {
  Grid<Point3<double>> normals;
  ValidMask valid;
};

// Unit normals from central-difference tangents, oriented so that they agree
// with `ideal`. Invalid on the border, next to invalid points, or where the
// tangents are degenerate.
NormalGrid SurfaceNormals(const PointGrid<double>& points,
                          const Point3<double>& ideal = {0.0, 1.0, 0.0});

// Set exactly on road pixels. Throws if the taxonomy has no road class.
ValidMask GroundMask(const PanopticMap& panoptic);

// h(p) = N(p)^T p for every ground pixel with a valid point and normal, in
// row-major order.
std::vector<double> CameraHeights(const PointGrid<double>& points,
                                  const NormalGrid& normals,
                                  const ValidMask& ground);

// Heights with the ideal normal substituted for the estimated one.
std::vector<double> CameraHeightsIdealNormal(const PointGrid<double>& points,
                                             const ValidMask& ground,
                                             const Point3<double>& ideal);

// Mean of the two middle values for even counts.
double Median(std::vector<double> values);

// rig height / median(heights). Throws kScaleUnavailable on empty input or a
// non-positive median.
double ScaleFactor(const CameraRig& rig, const std::vector<double>& heights);

ImageGrid ScaleDepth(const ImageGrid& relative_depth, double factor);

enum class GroundSelection {
  kPanopticRoad,  // Road pixels of the panoptic map.
  kNormalOnly,    // Pixels whose normal is within a cone of the ideal normal.
};

enum class NormalSource { kEstimated, kIdeal };

struct ScaleOptions {
  GroundSelection selection = GroundSelection::kPanopticRoad;
  NormalSource normal_source = NormalSource::kEstimated;
  double normal_cone_deg = 10.0;  // kNormalOnly only.
};

struct ScaleEstimate {
  double factor = 1.0;
  double median_height = 0.0;
  std::size_t ground_points = 0;
};

// Full scale recovery on a relative depth map. Throws kScaleUnavailable when
// no usable ground point exists.
ScaleEstimate EstimateScale(const ImageGrid& relative_depth,
                            const PanopticMap& panoptic, const Intrinsics& k,
                            const CameraRig& rig,
                            const ScaleOptions& options = {});

struct LabeledPoint {
  double x = 0.0, y = 0.0, z = 0.0;  // Camera frame, meters.
  std::int32_t class_id = 0;
  std::int32_t instance_id = 0;
};

struct LabeledPointCloud {
  std::vector<LabeledPoint> points;
};

// One point per pixel with positive finite depth whose class is not excluded,
// row-major.
LabeledPointCloud ProjectLabeled(const PanopticMap& panoptic,
                                 const ImageGrid& absolute_depth,
                                 const Intrinsics& k,
                                 const std::set<std::int32_t>& excluded);

// Sky and ego-car classes of the taxonomy, when present.
std::set<std::int32_t> DefaultExcludedClasses(const Taxonomy& taxonomy);

struct PlyMetadata {
  double scale_factor = 1.0;
  double camera_height_m = 0.0;
};

// ASCII PLY: x y z float, class_id instance_id ushort. The header comments
// record the scale factor and camera height.
void WritePly(std::ostream& os, const LabeledPointCloud& cloud,
              const PlyMetadata& meta);
void WritePly(const std::string& path, const LabeledPointCloud& cloud,
              const PlyMetadata& meta);

}  // namespace panodepth

#endif  // PANODEPTH_GEOMETRIC_SCALING_H_
