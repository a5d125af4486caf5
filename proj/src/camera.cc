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

#include "panodepth/camera.h"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace panodepth {

void Intrinsics::Validate() const {
  Require(fx > 0.0 && fy > 0.0, "intrinsics: focal lengths must be positive");
  Require(width > 0 && height > 0, "intrinsics: image size must be positive");
  Require(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height,
          "intrinsics: principal point outside the image");
}

PoseSE3 PoseSE3::operator*(const PoseSE3& other) const {
  PoseSE3 out;
  out.rotation = rotation * other.rotation;
  out.translation = rotation * other.translation + translation;
  return out;
}

PoseSE3 PoseSE3::Inverse() const {
  PoseSE3 out;
  out.rotation = rotation.transpose();
  out.translation = -(out.rotation * translation);
  return out;
}

void PoseSE3::Validate() const {
  const double ortho =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  Require(ortho <= 1e-9, "pose: rotation is not orthonormal");
  Require(std::abs(rotation.determinant() - 1.0) <= 1e-9,
          "pose: rotation determinant is not 1");
  Require(translation.allFinite(), "pose: non-finite translation");
}

PoseSE3 PoseFromAxisAngle(const Eigen::Vector3d& axis_angle,
                          const Eigen::Vector3d& translation) {
  const double theta2 = axis_angle.squaredNorm();
  const double theta = std::sqrt(theta2);
  Eigen::Matrix3d skew;
  skew << 0.0, -axis_angle(2), axis_angle(1),  //
      axis_angle(2), 0.0, -axis_angle(0),      //
      -axis_angle(1), axis_angle(0), 0.0;
  // Taylor expansions keep small angles accurate.
  double a, b;
  if (theta < 1e-6) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  PoseSE3 pose;
  pose.rotation = Eigen::Matrix3d::Identity() + a * skew + b * skew * skew;
  pose.translation = translation;
  return pose;
}

template <LossScalar T>
PointGrid<T> Backproject(const Grid<T>& depth, const Intrinsics& k,
                         const ValidMask* mask) {
  k.Validate();
  Require(depth.height() == k.height && depth.width() == k.width &&
              depth.channels() == 1,
          "backproject: depth shape does not match intrinsics");
  if (mask != nullptr) RequireSameShape(depth, *mask, "backproject mask");

  PointGrid<T> out{Grid<Point3<T>>(depth.height(), depth.width()),
                   MakeMask(depth.height(), depth.width(), false)};
  for (int v = 0; v < depth.height(); ++v) {
    const double ray_y = (v - k.cy) / k.fy;
    for (int u = 0; u < depth.width(); ++u) {
      const T& d = depth(v, u);
      const double ray_x = (u - k.cx) / k.fx;
      out.points(v, u) = {d * ray_x, d * ray_y, d};
      const bool masked_in = mask == nullptr || (*mask)(v, u) != 0;
      out.valid(v, u) = masked_in && ValueOf(d) > 0.0;
    }
  }
  return out;
}

namespace {

// Round-off slack so that back-projected border pixels project inside.
constexpr double kBoundsSlack = 1e-9;

bool InBounds(double u, double v, double max_u, double max_v) {
  return u >= -kBoundsSlack && u <= max_u + kBoundsSlack &&
         v >= -kBoundsSlack && v <= max_v + kBoundsSlack;
}

}  // namespace

template <LossScalar T>
Projection<T> Project(const PointGrid<T>& points, const Intrinsics& k) {
  const int h = points.height();
  const int w = points.width();
  Projection<T> out{Grid<T>(h, w, 2), Grid<T>(h, w, 1, T(), GridRole::kDepth),
                    MakeMask(h, w, false)};
  const double max_u = k.width - 1;
  const double max_v = k.height - 1;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const Point3<T>& p = points.points(r, c);
      out.depth(r, c) = p.z;
      if (points.valid(r, c) == 0 || !(ValueOf(p.z) > 0.0)) continue;
      const T u = k.fx * p.x / p.z + k.cx;
      const T v = k.fy * p.y / p.z + k.cy;
      out.coords(r, c, 0) = u;
      out.coords(r, c, 1) = v;
      const double uu = ValueOf(u);
      const double vv = ValueOf(v);
      out.valid(r, c) = InBounds(uu, vv, max_u, max_v);
    }
  }
  return out;
}

template <LossScalar T>
PointGrid<T> TransformPoints(const PointGrid<T>& points, const PoseSE3& pose) {
  PointGrid<T> out = points;
  for (auto& p : out.points.data()) p = pose.Apply(p);
  return out;
}

template <LossScalar T>
SampledImage<T> BilinearSample(const ImageGrid& src, const Grid<T>& coords,
                               const ValidMask& mask) {
  Require(coords.channels() == 2, "bilinear_sample: coords need 2 channels");
  RequireSameShape(coords, mask, "bilinear_sample mask", false);
  const int h = coords.height();
  const int w = coords.width();
  const int ch = src.channels();
  SampledImage<T> out{Grid<T>(h, w, ch), MakeMask(h, w, false)};
  if (src.empty()) return out;

  const double max_u = src.width() - 1;
  const double max_v = src.height() - 1;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (mask(r, c) == 0) continue;
      const T& u = coords(r, c, 0);
      const T& v = coords(r, c, 1);
      const double uu = ValueOf(u);
      const double vv = ValueOf(v);
      if (!InBounds(uu, vv, max_u, max_v)) continue;
      // Anchor the 2x2 stencil so the last row/column is reached with a unit
      // fractional weight instead of stepping outside the grid.
      const int x0 = std::clamp(static_cast<int>(std::floor(uu)), 0,
                                std::max(src.width() - 2, 0));
      const int y0 = std::clamp(static_cast<int>(std::floor(vv)), 0,
                                std::max(src.height() - 2, 0));
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const int y1 = std::min(y0 + 1, src.height() - 1);
      const T ax = u - static_cast<double>(x0);
      const T ay = v - static_cast<double>(y0);
      const T bx = 1.0 - ax;
      const T by = 1.0 - ay;
      for (int k = 0; k < ch; ++k) {
        out.image(r, c, k) = by * (bx * src(y0, x0, k) + ax * src(y0, x1, k)) +
                             ay * (bx * src(y1, x0, k) + ax * src(y1, x1, k));
      }
      out.valid(r, c) = 1;
    }
  }
  return out;
}

template <LossScalar T>
SampledImage<T> WarpFrame(const ImageGrid& source, const Grid<T>& target_depth,
                          const PoseSE3& pose_target_to_source,
                          const Intrinsics& k) {
  Require(source.height() == k.height && source.width() == k.width,
          "warp_frame: source shape does not match intrinsics");
  const PointGrid<T> points = Backproject(target_depth, k);
  const Projection<T> proj =
      Project(TransformPoints(points, pose_target_to_source), k);
  return BilinearSample(source, proj.coords, proj.valid);
}

#define PANODEPTH_INSTANTIATE_CAMERA(T)                                       \
  template PointGrid<T> Backproject(const Grid<T>&, const Intrinsics&,        \
                                    const ValidMask*);                        \
  template Projection<T> Project(const PointGrid<T>&, const Intrinsics&);     \
  template PointGrid<T> TransformPoints(const PointGrid<T>&, const PoseSE3&); \
  template SampledImage<T> BilinearSample(const ImageGrid&, const Grid<T>&,   \
                                          const ValidMask&);                  \
  template SampledImage<T> WarpFrame(const ImageGrid&, const Grid<T>&,        \
                                     const PoseSE3&, const Intrinsics&);

PANODEPTH_INSTANTIATE_CAMERA(double)
PANODEPTH_INSTANTIATE_CAMERA(Dual)

#undef PANODEPTH_INSTANTIATE_CAMERA

}  // namespace panodepth
