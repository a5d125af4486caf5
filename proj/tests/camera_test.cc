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

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>

#include "panodepth/error.h"

namespace panodepth {
namespace {

Intrinsics TestIntrinsics() { return {100.0, 90.0, 31.5, 23.5, 64, 48}; }

ImageGrid Ramp(int h, int w) {
  ImageGrid g(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) g(r, c) = 0.1 * r + 0.01 * c;
  return g;
}

TEST(Intrinsics, Validate) {
  EXPECT_NO_THROW(TestIntrinsics().Validate());
  Intrinsics bad = TestIntrinsics();
  bad.fx = 0.0;
  EXPECT_THROW(bad.Validate(), Error);
  bad = TestIntrinsics();
  bad.cx = 64.0;
  EXPECT_THROW(bad.Validate(), Error);
  bad = TestIntrinsics();
  bad.cy = -0.1;
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(Backproject, PrincipalPointIsOpticalAxis) {
  const Intrinsics k = TestIntrinsics();
  ImageGrid depth(k.height, k.width, 1, 1.0);
  // cx, cy are half-integers here, so use an intrinsics with integer center.
  Intrinsics ki = k;
  ki.cx = 31.0;
  ki.cy = 23.0;
  depth(23, 31) = 5.0;
  const auto pts = Backproject(depth, ki);
  const auto& p = pts.points(23, 31);
  EXPECT_DOUBLE_EQ(p.x, 0.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  EXPECT_DOUBLE_EQ(p.z, 5.0);
}

TEST(Backproject, UnitLateralRay) {
  Intrinsics k{10.0, 10.0, 20.0, 15.0, 40, 30};
  ImageGrid depth(30, 40, 1, 1.0);
  depth(15, 30) = 2.0;
  const auto pts = Backproject(depth, k);
  const auto& p = pts.points(15, 30);
  EXPECT_DOUBLE_EQ(p.x, 2.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  EXPECT_DOUBLE_EQ(p.z, 2.0);
}

TEST(Backproject, ShapeMismatchThrows) {
  ImageGrid depth(10, 10, 1, 1.0);
  EXPECT_THROW(Backproject(depth, TestIntrinsics()), Error);
}

TEST(Backproject, NonPositiveDepthIsInvalid) {
  const Intrinsics k = TestIntrinsics();
  ImageGrid depth(k.height, k.width, 1, 1.0);
  depth(3, 4) = 0.0;
  depth(5, 6) = -1.0;
  const auto pts = Backproject(depth, k);
  EXPECT_FALSE(pts.valid(3, 4));
  EXPECT_FALSE(pts.valid(5, 6));
  EXPECT_TRUE(pts.valid(0, 0));
}

TEST(Project, Examples) {
  Intrinsics k{10.0, 10.0, 20.0, 15.0, 40, 30};
  PointGrid<double> pts;
  pts.points = Grid<Point3<double>>(1, 3);
  pts.valid = MakeMask(1, 3, true);
  pts.points(0, 0) = {0.0, 0.0, 5.0};
  pts.points(0, 1) = {0.0, 0.0, -1.0};
  pts.points(0, 2) = {2.3, 0.0, 1.0};  // u = 43 = W + 3.
  const auto proj = Project(pts, k);
  EXPECT_TRUE(proj.valid(0, 0));
  EXPECT_DOUBLE_EQ(proj.coords(0, 0, 0), 20.0);
  EXPECT_DOUBLE_EQ(proj.coords(0, 0, 1), 15.0);
  EXPECT_DOUBLE_EQ(proj.depth(0, 0), 5.0);
  EXPECT_FALSE(proj.valid(0, 1));
  EXPECT_FALSE(proj.valid(0, 2));
}

TEST(Project, BorderPixelsAreInside) {
  Intrinsics k{10.0, 10.0, 0.0, 0.0, 40, 30};
  PointGrid<double> pts;
  pts.points = Grid<Point3<double>>(1, 2);
  pts.valid = MakeMask(1, 2, true);
  pts.points(0, 0) = {0.0, 0.0, 1.0};    // (0, 0)
  pts.points(0, 1) = {3.9, 2.9, 1.0};    // (39, 29)
  const auto proj = Project(pts, k);
  EXPECT_TRUE(proj.valid(0, 0));
  EXPECT_TRUE(proj.valid(0, 1));
}

TEST(Camera, RoundTripRandomDepth) {
  const Intrinsics k = TestIntrinsics();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.5, 80.0);
  ImageGrid depth(k.height, k.width);
  for (auto& d : depth.data()) d = dist(rng);
  const auto proj =
      Project(TransformPoints(Backproject(depth, k), PoseSE3::Identity()), k);
  for (int r = 0; r < k.height; ++r) {
    for (int c = 0; c < k.width; ++c) {
      ASSERT_TRUE(proj.valid(r, c));
      EXPECT_NEAR(proj.coords(r, c, 0), c, 1e-9);
      EXPECT_NEAR(proj.coords(r, c, 1), r, 1e-9);
      EXPECT_NEAR(proj.depth(r, c), depth(r, c), 1e-9);
    }
  }
}

TEST(TransformPoints, Examples) {
  PointGrid<double> pts;
  pts.points = Grid<Point3<double>>(1, 1);
  pts.valid = MakeMask(1, 1, true);
  pts.points(0, 0) = {0.0, 0.0, 5.0};
  const auto same = TransformPoints(pts, PoseSE3::Identity());
  EXPECT_EQ(same.points(0, 0).z, 5.0);
  const auto moved =
      TransformPoints(pts, PoseFromAxisAngle({0, 0, 0}, {0, 0, 1}));
  EXPECT_DOUBLE_EQ(moved.points(0, 0).x, 0.0);
  EXPECT_DOUBLE_EQ(moved.points(0, 0).y, 0.0);
  EXPECT_DOUBLE_EQ(moved.points(0, 0).z, 6.0);

  const PoseSE3 pose = PoseFromAxisAngle({0.1, -0.2, 0.3}, {1.0, 2.0, -0.5});
  pts.points(0, 0) = {1.5, -0.7, 4.2};
  const auto back = TransformPoints(TransformPoints(pts, pose), pose.Inverse());
  EXPECT_NEAR(back.points(0, 0).x, 1.5, 1e-9);
  EXPECT_NEAR(back.points(0, 0).y, -0.7, 1e-9);
  EXPECT_NEAR(back.points(0, 0).z, 4.2, 1e-9);
}

TEST(TransformPoints, ValidityPreserved) {
  PointGrid<double> pts;
  pts.points = Grid<Point3<double>>(1, 2);
  pts.valid = MakeMask(1, 2, true);
  pts.valid(0, 1) = 0;
  const auto out = TransformPoints(pts, PoseFromAxisAngle({0, 1, 0}, {0, 0, 0}));
  EXPECT_TRUE(out.valid(0, 0));
  EXPECT_FALSE(out.valid(0, 1));
}

TEST(BilinearSample, Examples) {
  const ImageGrid src = Ramp(8, 8);
  ImageGrid coords(1, 3, 2);
  coords(0, 0, 0) = 3.0;  // u = 3 (col), v = 4 (row)
  coords(0, 0, 1) = 4.0;
  coords(0, 1, 0) = -0.5;
  coords(0, 1, 1) = 2.0;
  coords(0, 2, 0) = 7.0;  // Last column is still inside.
  coords(0, 2, 1) = 7.0;
  const auto out = BilinearSample(src, coords, MakeMask(1, 3, true));
  EXPECT_TRUE(out.valid(0, 0));
  EXPECT_DOUBLE_EQ(out.image(0, 0), src(4, 3));
  EXPECT_FALSE(out.valid(0, 1));
  EXPECT_TRUE(out.valid(0, 2));
  EXPECT_DOUBLE_EQ(out.image(0, 2), src(7, 7));
}

TEST(BilinearSample, Midpoint) {
  ImageGrid src(2, 2);
  src(0, 1) = 1.0;
  src(1, 1) = 1.0;
  ImageGrid coords(1, 1, 2);
  coords(0, 0, 0) = 0.5;
  coords(0, 0, 1) = 0.0;
  const auto out = BilinearSample(src, coords, MakeMask(1, 1, true));
  EXPECT_TRUE(out.valid(0, 0));
  EXPECT_DOUBLE_EQ(out.image(0, 0), 0.5);
}

TEST(BilinearSample, InputMaskPropagates) {
  const ImageGrid src = Ramp(4, 4);
  ImageGrid coords(1, 1, 2, 1.0);
  const auto out = BilinearSample(src, coords, MakeMask(1, 1, false));
  EXPECT_FALSE(out.valid(0, 0));
}

TEST(BilinearSample, MaskMonotoneUnderShrinkingImage) {
  // Growing the coordinate spread (equivalently shrinking the image region)
  // never sets a bit that was cleared.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-2.0, 10.0);
  ImageGrid coords(16, 16, 2);
  for (auto& v : coords.data()) v = dist(rng);
  const ImageGrid big = Ramp(9, 9);
  const ImageGrid small = Ramp(7, 7);
  const auto a = BilinearSample(big, coords, MakeMask(16, 16, true));
  const auto b = BilinearSample(small, coords, MakeMask(16, 16, true));
  for (std::size_t i = 0; i < a.valid.size(); ++i) {
    if (!a.valid.data()[i]) EXPECT_FALSE(b.valid.data()[i]);
  }
}

TEST(WarpFrame, IdentityPoseIsIdentity) {
  const Intrinsics k = TestIntrinsics();
  const ImageGrid src = Ramp(k.height, k.width);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(1.0, 30.0);
  ImageGrid depth(k.height, k.width);
  for (auto& d : depth.data()) d = dist(rng);
  const auto out = WarpFrame(src, depth, PoseSE3::Identity(), k);
  EXPECT_EQ(CountSet(out.valid), src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    EXPECT_NEAR(out.image.data()[i], src.data()[i], 1e-9);
  }
}

TEST(Pose, AxisAngleExamples) {
  const PoseSE3 id = PoseFromAxisAngle({0, 0, 0}, {0, 0, 0});
  EXPECT_TRUE(id.rotation.isApprox(Eigen::Matrix3d::Identity(), 0.0));
  EXPECT_TRUE(id.translation.isZero(0.0));
  const PoseSE3 quarter =
      PoseFromAxisAngle({0, 0, std::numbers::pi / 2}, {0, 0, 0});
  const auto p = quarter.Apply(Point3<double>{1.0, 0.0, 0.0});
  EXPECT_NEAR(p.x, 0.0, 1e-12);
  EXPECT_NEAR(p.y, 1.0, 1e-12);
  EXPECT_NEAR(p.z, 0.0, 1e-12);
}

TEST(Pose, ExpLogRoundTrip) {
  // Matrix-log oracle: Eigen's angle-axis extraction.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d w(dist(rng), dist(rng), dist(rng));
    const PoseSE3 pose = PoseFromAxisAngle(w, {0, 0, 0});
    EXPECT_NO_THROW(pose.Validate());
    const Eigen::AngleAxisd aa(pose.rotation);
    const Eigen::Vector3d back = aa.angle() * aa.axis();
    EXPECT_NEAR((back - w).norm(), 0.0, 1e-9);
  }
  const Eigen::Vector3d tiny(1e-9, -2e-9, 3e-9);
  const PoseSE3 small = PoseFromAxisAngle(tiny, {0, 0, 0});
  EXPECT_NO_THROW(small.Validate());
  EXPECT_NEAR(small.rotation(1, 0), 3e-9, 1e-15);
}

TEST(Pose, CompositionAssociativeAndInverse) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto random_pose = [&] {
    return PoseFromAxisAngle({dist(rng), dist(rng), dist(rng)},
                             {dist(rng), dist(rng), dist(rng)});
  };
  for (int i = 0; i < 50; ++i) {
    const PoseSE3 a = random_pose(), b = random_pose(), c = random_pose();
    const PoseSE3 l = (a * b) * c;
    const PoseSE3 r = a * (b * c);
    EXPECT_LT((l.rotation - r.rotation).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((l.translation - r.translation).cwiseAbs().maxCoeff(), 1e-12);
    const PoseSE3 e = a * a.Inverse();
    EXPECT_LT((e.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LT(e.translation.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Pose, ValidateRejectsNonRotation) {
  PoseSE3 p;
  p.rotation(0, 0) = 2.0;
  EXPECT_THROW(p.Validate(), Error);
  PoseSE3 reflect;
  reflect.rotation(2, 2) = -1.0;
  EXPECT_THROW(reflect.Validate(), Error);
}

TEST(Pose, ComposeOrder) {
  const PoseSE3 t = PoseFromAxisAngle({0, 0, 0}, {1, 0, 0});
  const PoseSE3 r = PoseFromAxisAngle({0, 0, std::numbers::pi / 2}, {0, 0, 0});
  // r * t translates first, then rotates.
  const auto p = (r * t).Apply(Point3<double>{0, 0, 0});
  EXPECT_NEAR(p.x, 0.0, 1e-12);
  EXPECT_NEAR(p.y, 1.0, 1e-12);
}

}  // namespace
}  // namespace panodepth
