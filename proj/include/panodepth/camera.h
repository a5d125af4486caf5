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

// Pinhole camera model, rigid transforms and the inverse-warp used by the
// photometric loss.
//
// Conventions: camera frame is x right, y down, z forward. Pixel (u, v) is
// column u, row v, and refers to the exact point (u, v) with no half-pixel
// offset. Pixel coordinate grids store u in channel 0 and v in channel 1.

#ifndef PANODEPTH_CAMERA_H_
#define PANODEPTH_CAMERA_H_

#include <Eigen/Core>

#include "panodepth/dual.h"
#include "panodepth/grid.h"

namespace panodepth {

template <typename T>
struct Point3 {
  T x{}, y{}, z{};

  friend Point3 operator+(const Point3& a, const Point3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Point3 operator-(const Point3& a, const Point3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Point3 operator*(const T& s, const Point3& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
};

template <typename T>
T Dot(const Point3<T>& a, const Point3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
Point3<T> Cross(const Point3<T>& a, const Point3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  // Throws kContractViolation unless fx, fy > 0 and the principal point lies
  // inside the image.
  void Validate() const;
};

// Rigid transform p' = R p + t. Translation is in meters.
struct PoseSE3 {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static PoseSE3 Identity() { return {}; }

  // (a * b) applies b first, then a.
  PoseSE3 operator*(const PoseSE3& other) const;
  PoseSE3 Inverse() const;

  template <typename T>
  Point3<T> Apply(const Point3<T>& p) const {
    const auto& r = rotation;
    return {r(0, 0) * p.x + r(0, 1) * p.y + r(0, 2) * p.z + translation(0),
            r(1, 0) * p.x + r(1, 1) * p.y + r(1, 2) * p.z + translation(1),
            r(2, 0) * p.x + r(2, 1) * p.y + r(2, 2) * p.z + translation(2)};
  }

  // Throws unless R is orthonormal with det(R) = 1 within 1e-9.
  void Validate() const;
};

// Rodrigues exponential map. A zero axis-angle vector gives the identity.
PoseSE3 PoseFromAxisAngle(const Eigen::Vector3d& axis_angle,
                          const Eigen::Vector3d& translation);

template <typename T>
struct PointGrid {
  Grid<Point3<T>> points;
  ValidMask valid;

  int height() const { return points.height(); }
  int width() const { return points.width(); }
};

template <typename T>
struct Projection {
  Grid<T> coords;  // 2 channels: u, v.
  Grid<T> depth;
  ValidMask valid;
};

template <typename T>
struct SampledImage {
  Grid<T> image;
  ValidMask valid;
};

// p(u, v) = d(u, v) K^-1 (u, v, 1)^T. Points are valid where depth > 0 and,
// when given, `mask` is set.
template <LossScalar T>
PointGrid<T> Backproject(const Grid<T>& depth, const Intrinsics& k,
                         const ValidMask* mask = nullptr);

// Invalid where z <= 0 or the projection leaves [0, W-1] x [0, H-1].
template <LossScalar T>
Projection<T> Project(const PointGrid<T>& points, const Intrinsics& k);

template <LossScalar T>
PointGrid<T> TransformPoints(const PointGrid<T>& points, const PoseSE3& pose);

// Bilinear interpolation of `src` at `coords`. Samples outside the grid are
// invalidated, never clamped.
template <LossScalar T>
SampledImage<T> BilinearSample(const ImageGrid& src, const Grid<T>& coords,
                               const ValidMask& mask);

// Synthesizes the target view from `source` using target depth and the
// target-to-source transform. The returned mask marks valid projections.
template <LossScalar T>
SampledImage<T> WarpFrame(const ImageGrid& source, const Grid<T>& target_depth,
                          const PoseSE3& pose_target_to_source,
                          const Intrinsics& k);

}  // namespace panodepth

#endif  // PANODEPTH_CAMERA_H_
