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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "panodepth/error.h"
#include "panodepth/synthetic.h"

namespace panodepth {
namespace {

Intrinsics Cam() { return {80.0, 80.0, 47.5, 20.0, 96, 64}; }

// Depth of the plane n^T p = d along each pixel ray; 0 where the ray misses.
ImageGrid PlaneDepth(const Intrinsics& k, const Point3<double>& n, double d) {
  ImageGrid depth(k.height, k.width);
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      const Point3<double> ray{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
      const double denom = Dot(n, ray);
      depth(v, u) = denom > 1e-9 ? d / denom : 0.0;
    }
  }
  return depth;
}

PanopticMap AllRoad(int h, int w) {
  PanopticMap m;
  m.taxonomy = DefaultTaxonomy();
  m.semantic = LabelGrid(h, w, 1, kRoad);
  m.instance = LabelGrid(h, w, 1, 0);
  return m;
}

SceneSpec RoadScene() {
  SceneSpec spec;
  spec.intrinsics = {120.0, 120.0, 79.5, 16.0, 160, 96};
  spec.rig.height_m = 1.5;
  return spec;
}

TEST(SurfaceNormals, HorizontalPlane) {
  const Intrinsics k = Cam();
  const auto pts = Backproject(PlaneDepth(k, {0, 1, 0}, 1.5), k);
  const NormalGrid n = SurfaceNormals(pts);
  std::size_t interior = 0;
  for (int r = 0; r < k.height; ++r) {
    for (int c = 0; c < k.width; ++c) {
      if (!n.valid(r, c)) continue;
      ++interior;
      EXPECT_NEAR(n.normals(r, c).x, 0.0, 1e-12);
      EXPECT_NEAR(n.normals(r, c).y, 1.0, 1e-12);
      EXPECT_NEAR(n.normals(r, c).z, 0.0, 1e-12);
    }
  }
  EXPECT_GT(interior, 1000u);
  EXPECT_FALSE(n.valid(0, 10));
  EXPECT_FALSE(n.valid(40, 0));
}

TEST(SurfaceNormals, FrontalPlane) {
  const Intrinsics k = Cam();
  const auto pts = Backproject(ImageGrid(k.height, k.width, 1, 7.0), k);
  const NormalGrid n = SurfaceNormals(pts);
  ASSERT_TRUE(n.valid(30, 30));
  EXPECT_NEAR(Dot(n.normals(30, 30), Point3<double>{0, 1, 0}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(n.normals(30, 30).z), 1.0, 1e-12);
}

TEST(SurfaceNormals, TiltedPlane) {
  const Intrinsics k = Cam();
  Point3<double> normal{0.2, 0.9, -0.3};
  const double len = std::sqrt(Dot(normal, normal));
  normal = (1.0 / len) * normal;
  const auto pts = Backproject(PlaneDepth(k, normal, 2.0), k);
  const NormalGrid n = SurfaceNormals(pts);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < n.valid.size(); ++i) {
    if (!n.valid.data()[i]) continue;
    ++checked;
    const auto& got = n.normals.data()[i];
    EXPECT_NEAR(got.x, normal.x, 1e-6);
    EXPECT_NEAR(got.y, normal.y, 1e-6);
    EXPECT_NEAR(got.z, normal.z, 1e-6);
  }
  EXPECT_GT(checked, 100u);
}

TEST(SurfaceNormals, InvalidNeighbors) {
  const Intrinsics k = Cam();
  ImageGrid depth = PlaneDepth(k, {0, 1, 0}, 1.5);
  depth(40, 40) = 0.0;
  const NormalGrid n = SurfaceNormals(Backproject(depth, k));
  EXPECT_FALSE(n.valid(40, 40));
  EXPECT_FALSE(n.valid(40, 41));
  EXPECT_FALSE(n.valid(39, 40));
  EXPECT_TRUE(n.valid(42, 42));
}

TEST(GroundMask, Examples) {
  PanopticMap m = AllRoad(4, 5);
  EXPECT_EQ(CountSet(GroundMask(m)), 20u);
  m.semantic = LabelGrid(4, 5, 1, kSky);
  EXPECT_EQ(CountSet(GroundMask(m)), 0u);
  std::mt19937_64 rng(1);
  for (auto& v : m.semantic.data()) v = static_cast<std::int32_t>(rng() % 3);
  const ValidMask g = GroundMask(m);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_EQ(g.data()[i] != 0, m.semantic.data()[i] == kRoad);
  m.taxonomy.road_id.reset();
  EXPECT_THROW(GroundMask(m), Error);
}

TEST(CameraHeights, Examples) {
  const Intrinsics k = Cam();
  const auto pts = Backproject(PlaneDepth(k, {0, 1, 0}, 1.2), k);
  const NormalGrid n = SurfaceNormals(pts);
  const auto heights = CameraHeights(pts, n, MakeMask(k.height, k.width, true));
  ASSERT_FALSE(heights.empty());
  for (double h : heights) EXPECT_NEAR(h, 1.2, 1e-12);
  EXPECT_EQ(heights.size(), CountSet(n.valid));

  PointGrid<double> one;
  one.points = Grid<Point3<double>>(1, 1);
  one.points(0, 0) = {3.0, 1.2, 10.0};
  one.valid = MakeMask(1, 1, true);
  const auto ideal = CameraHeightsIdealNormal(one, MakeMask(1, 1, true), {0, 1, 0});
  ASSERT_EQ(ideal.size(), 1u);
  EXPECT_DOUBLE_EQ(ideal[0], 1.2);
}

TEST(CameraHeights, NoisyPlaneMedianWithinOnePercent) {
  const Intrinsics k = Cam();
  ImageGrid depth = PlaneDepth(k, {0, 1, 0}, 1.5);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (auto& d : depth.data())
    if (d > 0) d += noise(rng);
  const auto pts = Backproject(depth, k);
  const auto heights =
      CameraHeights(pts, SurfaceNormals(pts), MakeMask(k.height, k.width, true));
  EXPECT_NEAR(Median(heights), 1.5, 0.015);
}

TEST(Median, Definition) {
  EXPECT_EQ(Median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(Median({4.0, 1.0, 3.0, 2.0}), 2.5);
  try {
    Median({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kScaleUnavailable);
  }
}

TEST(ScaleFactor, Examples) {
  CameraRig rig;
  rig.height_m = 1.5;
  EXPECT_DOUBLE_EQ(ScaleFactor(rig, {0.75, 0.75, 0.75}), 2.0);
  EXPECT_DOUBLE_EQ(ScaleFactor(rig, {1.5, 1.5}), 1.0);
  EXPECT_DOUBLE_EQ(ScaleFactor(rig, {1.0, 2.0, 100.0}), 0.75);
  for (const std::vector<double>& bad :
       {std::vector<double>{}, std::vector<double>{-1.0, -2.0, 3.0}}) {
    try {
      ScaleFactor(rig, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kScaleUnavailable);
    }
  }
}

TEST(ScaleDepth, Examples) {
  const ImageGrid d(3, 3, 1, 3.0);
  const ImageGrid same = ScaleDepth(d, 1.0);
  for (double v : same.data()) EXPECT_EQ(v, 3.0);
  const ImageGrid twice = ScaleDepth(d, 2.0);
  for (double v : twice.data()) EXPECT_EQ(v, 6.0);
  EXPECT_THROW(ScaleDepth(d, 0.0), Error);
  EXPECT_THROW(ScaleDepth(d, -1.0), Error);
}

TEST(EstimateScale, RecoversHalvedDepth) {
  const SceneSpec spec = RoadScene();
  const RenderedFrame f = Render(spec, PoseSE3::Identity());
  const ImageGrid rel = ScaleDepth(f.depth, 0.5);
  const ScaleEstimate est = EstimateScale(rel, f.panoptic, spec.intrinsics, spec.rig);
  EXPECT_NEAR(est.factor, 2.0, 1e-9);
  const ImageGrid restored = ScaleDepth(rel, est.factor);
  for (std::size_t i = 0; i < restored.size(); ++i)
    EXPECT_NEAR(restored.data()[i], f.depth.data()[i], 1e-9 * (1 + f.depth.data()[i]));
}

TEST(EstimateScale, ScaleEquivariance) {
  const SceneSpec spec = RoadScene();
  const RenderedFrame f = Render(spec, PoseSE3::Identity());
  const ImageGrid noisy = AddMultiplicativeNoise(f.depth, 0.01, 3);
  const double base =
      EstimateScale(noisy, f.panoptic, spec.intrinsics, spec.rig).factor;
  for (double lambda : {0.1, 0.5, 3.0, 17.0}) {
    const double scaled =
        EstimateScale(ScaleDepth(noisy, lambda), f.panoptic, spec.intrinsics, spec.rig)
            .factor;
    EXPECT_NEAR(scaled * lambda / base, 1.0, 1e-12);
  }
}

TEST(EstimateScale, NoRoadIsUnavailable) {
  const SceneSpec spec = RoadScene();
  const RenderedFrame f = Render(spec, PoseSE3::Identity());
  PanopticMap sky = f.panoptic;
  for (auto& v : sky.semantic.data()) v = kSky;
  try {
    EstimateScale(f.depth, sky, spec.intrinsics, spec.rig);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kScaleUnavailable);
  }
}

TEST(EstimateScale, RoofExcludedByPanopticSelection) {
  SceneSpec spec = RoadScene();
  spec.boxes.push_back({{0.0, 1.0, 6.0}, {2.0, 1.0, 3.0}, kCar, 0.9});
  const RenderedFrame f = Render(spec, PoseSE3::Identity());
  const PointGrid<double> pts = Backproject(f.depth, spec.intrinsics);
  const NormalGrid normals = SurfaceNormals(pts);
  const ValidMask ground = GroundMask(f.panoptic);
  // Roof pixels: car class with upward normal.
  std::size_t roof = 0;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (f.panoptic.semantic.data()[i] != kCar || !normals.valid.data()[i]) continue;
    if (normals.normals.data()[i].y > 0.999) {
      ++roof;
      EXPECT_EQ(ground.data()[i], 0);
    }
  }
  EXPECT_GT(roof, 0u);
  const ScaleEstimate road =
      EstimateScale(f.depth, f.panoptic, spec.intrinsics, spec.rig);
  EXPECT_NEAR(road.factor, 1.0, 1e-9);
  ScaleOptions normal_only;
  normal_only.selection = GroundSelection::kNormalOnly;
  const ScaleEstimate naive =
      EstimateScale(f.depth, f.panoptic, spec.intrinsics, spec.rig, normal_only);
  EXPECT_GT(naive.ground_points, road.ground_points);
}

TEST(ProjectLabeled, Examples) {
  Intrinsics k{10.0, 10.0, 2.0, 1.0, 5, 3};
  PanopticMap sky = AllRoad(3, 5);
  for (auto& v : sky.semantic.data()) v = kSky;
  const ImageGrid depth(3, 5, 1, 4.0);
  const auto excluded = DefaultExcludedClasses(sky.taxonomy);
  EXPECT_EQ(excluded, (std::set<std::int32_t>{kSky, kEgoCar}));
  EXPECT_TRUE(ProjectLabeled(sky, depth, k, excluded).points.empty());

  PanopticMap one = sky;
  one.semantic(1, 2) = kRoad;
  const auto cloud = ProjectLabeled(one, depth, k, excluded);
  ASSERT_EQ(cloud.points.size(), 1u);
  const auto& p = cloud.points[0];
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.y, 0.0);
  EXPECT_EQ(p.z, 4.0);
  EXPECT_EQ(p.class_id, kRoad);
  EXPECT_EQ(p.instance_id, 0);
}

TEST(ProjectLabeled, CountAndBackprojectConsistency) {
  SceneSpec spec = RoadScene();
  spec.boxes.push_back({{1.0, 0.75, 8.0}, {2.0, 1.5, 3.0}, kCar, 0.9});
  const RenderedFrame f = Render(spec, PoseSE3::Identity());
  const auto excluded = DefaultExcludedClasses(f.panoptic.taxonomy);
  // Sky pixels have zero depth in the render; replace with a valid depth so
  // the count only depends on the class filter.
  ImageGrid depth = f.depth;
  for (auto& d : depth.data())
    if (d <= 0) d = 50.0;
  PanopticMap pan = f.panoptic;
  pan.semantic(0, 0) = kEgoCar;
  const auto cloud = ProjectLabeled(pan, depth, spec.intrinsics, excluded);
  std::size_t excluded_px = 0;
  for (auto v : pan.semantic.data()) excluded_px += excluded.count(v);
  EXPECT_EQ(cloud.points.size(), pan.semantic.size() - excluded_px);
  const auto pts = Backproject(depth, spec.intrinsics);
  std::size_t idx = 0;
  for (int r = 0; r < depth.height(); ++r) {
    for (int c = 0; c < depth.width(); ++c) {
      if (excluded.count(pan.semantic(r, c))) continue;
      const auto& q = cloud.points[idx++];
      EXPECT_EQ(q.x, pts.points(r, c).x);
      EXPECT_EQ(q.y, pts.points(r, c).y);
      EXPECT_EQ(q.z, pts.points(r, c).z);
      EXPECT_EQ(q.class_id, pan.semantic(r, c));
      EXPECT_EQ(q.instance_id, pan.instance(r, c));
      EXPECT_GT(q.z, 0.0);
    }
  }
}

TEST(ProjectLabeled, SkipsInvalidDepthAndChecksShape) {
  PanopticMap m = AllRoad(2, 2);
  ImageGrid depth(2, 2, 1, 1.0);
  depth(0, 0) = 0.0;
  depth(0, 1) = NAN;
  Intrinsics k{1.0, 1.0, 0.5, 0.5, 2, 2};
  EXPECT_EQ(ProjectLabeled(m, depth, k, {}).points.size(), 2u);
  EXPECT_THROW(ProjectLabeled(m, ImageGrid(3, 2, 1, 1.0), k, {}), Error);
}

TEST(WritePly, HeaderAndRows) {
  LabeledPointCloud cloud;
  cloud.points.push_back({1.0, 2.0, 3.5, kRoad, 0});
  cloud.points.push_back({-0.25, 1.5, 10.0, kCar, 2});
  std::ostringstream os;
  WritePly(os, cloud, {2.0, 1.5});
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  ASSERT_GE(lines.size(), 12u);
  EXPECT_EQ(lines[0], "ply");
  EXPECT_EQ(lines[1], "format ascii 1.0");
  EXPECT_EQ(lines[2], "comment scale_factor 2");
  EXPECT_EQ(lines[3], "comment camera_height_m 1.5");
  EXPECT_EQ(lines[4], "element vertex 2");
  EXPECT_EQ(lines[8], "property ushort class_id");
  EXPECT_EQ(lines[9], "property ushort instance_id");
  EXPECT_EQ(lines[10], "end_header");
  EXPECT_EQ(lines[11], "1 2 3.5 0 0");
  EXPECT_EQ(lines[12], "-0.25 1.5 10 13 2");
}

}  // namespace
}  // namespace panodepth
