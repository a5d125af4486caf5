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

#include "panodepth/synthetic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace panodepth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// (0, 1], never 0 so the logarithm below stays finite.
double ToUnit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double Coord(const Point3<double>& p, int axis) {
  return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

struct Hit {
  double s = kInf;  // Ray parameter; equals camera-frame depth.
  int object = -1;  // -1 ground, >= 0 box index.
  int axis = 1;     // Face normal axis.
  double normal_sign = -1.0;
};

bool InsideBox(const BoxSpec& box, const Point3<double>& p) {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(Coord(p, a) - Coord(box.center, a)) >= 0.5 * Coord(box.size, a))
      return false;
  }
  return true;
}

// Slab test. Returns the entry parameter and face, or s = inf on a miss.
Hit IntersectBox(const BoxSpec& box, const Point3<double>& o,
                 const Point3<double>& d) {
  double t_near = -kInf, t_far = kInf;
  int axis = -1;
  double sign = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double oa = Coord(o, a), da = Coord(d, a);
    const double lo = Coord(box.center, a) - 0.5 * Coord(box.size, a);
    const double hi = Coord(box.center, a) + 0.5 * Coord(box.size, a);
    if (da == 0.0) {
      if (oa < lo || oa > hi) return {};
      continue;
    }
    double t0 = (lo - oa) / da, t1 = (hi - oa) / da;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_near) {
      t_near = t0;
      axis = a;
      sign = da > 0.0 ? -1.0 : 1.0;
    }
    t_far = std::min(t_far, t1);
  }
  if (axis < 0 || t_near > t_far || t_near <= 0.0) return {};
  return {t_near, 0, axis, sign};
}

double Texture(const TextureSpec& tex, double a, double b) {
  const double k = 2.0 * std::numbers::pi / tex.period_m;
  const double mid = 0.5 * (tex.low + tex.high);
  const double amp = 0.5 * (tex.high - tex.low);
  // Second, incommensurate component breaks the periodicity.
  const double base = std::sin(k * a) * std::sin(k * b);
  const double detail = std::sin(2.7 * k * a + 1.0) * std::sin(2.3 * k * b + 2.0);
  return mid + amp * (0.6 * base + 0.4 * detail);
}

}  // namespace

void SceneSpec::Validate() const {
  Require(rig.height_m > 0.0, "scene: camera height must be positive");
  intrinsics.Validate();
  taxonomy.Validate();
  Require(taxonomy.road_id && taxonomy.sky_id,
          "scene: taxonomy needs road and sky classes");
  Require(texture.period_m > 0.0 && texture.low >= 0.0 &&
              texture.high <= 1.0 && texture.low <= texture.high,
          "scene: invalid texture spec");
  Require(noise_sigma >= 0.0, "scene: noise sigma must be non-negative");
  for (const auto& box : boxes) {
    Require(box.size.x > 0.0 && box.size.y > 0.0 && box.size.z > 0.0,
            "scene: box sizes must be positive");
    Require(box.center.y + 0.5 * box.size.y <= rig.height_m + 1e-12,
            "scene: box extends below the ground plane");
    Require(taxonomy.IsKnown(box.class_id), "scene: unknown box class");
    Require(box.albedo > 0.0, "scene: box albedo must be positive");
  }
}

RenderedFrame Render(const SceneSpec& spec, const PoseSE3& camera_to_world,
                     std::uint64_t seed) {
  spec.Validate();
  camera_to_world.Validate();
  const Intrinsics& k = spec.intrinsics;
  const Point3<double> origin{camera_to_world.translation(0),
                              camera_to_world.translation(1),
                              camera_to_world.translation(2)};
  Require(origin.y < spec.rig.height_m, "render: camera below the ground plane");
  for (const auto& box : spec.boxes) {
    Require(!InsideBox(box, origin), "render: camera inside a box");
  }

  const double light_norm = std::sqrt(Dot(spec.light_dir, spec.light_dir));
  const Point3<double> light = (1.0 / light_norm) * spec.light_dir;
  const PoseSE3 rotation_only{camera_to_world.rotation, Eigen::Vector3d::Zero()};

  RenderedFrame out;
  out.image = ImageGrid(k.height, k.width, 1, 0.0, GridRole::kIntensity);
  out.depth = ImageGrid(k.height, k.width, 1, 0.0, GridRole::kDepth);
  out.valid = MakeMask(k.height, k.width, false);
  out.panoptic.taxonomy = spec.taxonomy;
  out.panoptic.semantic = LabelGrid(k.height, k.width, 1, *spec.taxonomy.sky_id,
                                    GridRole::kLabel);
  out.panoptic.instance = LabelGrid(k.height, k.width, 1, 0, GridRole::kLabel);

  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      const Point3<double> ray{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
      const Point3<double> dir = rotation_only.Apply(ray);

      Hit best;
      if (dir.y > 0.0) {
        best.s = (spec.rig.height_m - origin.y) / dir.y;
        best.object = -1;
      }
      for (std::size_t b = 0; b < spec.boxes.size(); ++b) {
        Hit hit = IntersectBox(spec.boxes[b], origin, dir);
        if (hit.s < best.s) {
          hit.object = static_cast<int>(b);
          best = hit;
        }
      }
      if (!std::isfinite(best.s)) continue;

      const Point3<double> p = origin + best.s * dir;
      double albedo, shade_dot;
      std::int32_t label;
      std::int32_t instance = 0;
      if (best.object < 0) {
        albedo = Texture(spec.texture, p.x, p.z);
        shade_dot = -light.y;
        label = *spec.taxonomy.road_id;
      } else {
        const BoxSpec& box = spec.boxes[best.object];
        const int a0 = best.axis == 0 ? 1 : 0;
        const int a1 = best.axis == 2 ? 1 : 2;
        albedo = box.albedo * Texture(spec.texture, Coord(p, a0), Coord(p, a1));
        shade_dot = best.normal_sign * Coord(light, best.axis);
        label = box.class_id;
        if (spec.taxonomy.IsThing(label)) instance = best.object + 1;
      }
      double intensity =
          albedo * (spec.ambient + (1.0 - spec.ambient) * std::max(0.0, shade_dot));
      if (spec.noise_sigma > 0.0) {
        const std::uint64_t index = static_cast<std::uint64_t>(v) * k.width + u;
        intensity += spec.noise_sigma * CounterNormal(seed, index);
      }
      out.image(v, u) = std::clamp(intensity, 0.0, 1.0);
      out.depth(v, u) = best.s;
      out.valid(v, u) = 1;
      out.panoptic.semantic(v, u) = label;
      out.panoptic.instance(v, u) = instance;
    }
  }
  CanonicalizeInstanceIds(out.panoptic.instance);
  return out;
}

RenderedPair RenderPair(const SceneSpec& spec,
                        const PoseSE3& camera_to_world_target,
                        const PoseSE3& target_to_source, std::uint64_t seed) {
  const PoseSE3 camera_to_world_source =
      camera_to_world_target * target_to_source.Inverse();
  return {Render(spec, camera_to_world_target, seed),
          Render(spec, camera_to_world_source, seed + 1), target_to_source};
}

double CounterNormal(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t base = SplitMix64(seed ^ SplitMix64(index));
  const double u1 = ToUnit(SplitMix64(base));
  const double u2 = ToUnit(SplitMix64(base + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ImageGrid AddMultiplicativeNoise(const ImageGrid& depth, double sigma,
                                 std::uint64_t seed) {
  ImageGrid out = depth;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.data()[i] > 0.0) {
      out.data()[i] *= 1.0 + sigma * CounterNormal(seed, i);
    }
  }
  return out;
}

}  // namespace panodepth
