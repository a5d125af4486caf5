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

// Analytic test scenes: a textured ground plane plus axis-aligned boxes,
// ray cast per pixel to give images with exact depth, exact panoptic labels
// and exact inter-frame poses.
//
// World frame equals the camera frame at the identity pose: x right, y down,
// z forward, with the ground plane at y = camera height. Poses passed to the
// renderer are camera-to-world.

#ifndef PANODEPTH_SYNTHETIC_H_
#define PANODEPTH_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "panodepth/camera.h"
#include "panodepth/geometric_scaling.h"
#include "panodepth/grid.h"
#include "panodepth/panoptic_map.h"

namespace panodepth {

// Sinusoidal checker on surface coordinates (meters): intensity oscillates
// between low and high with the given period on each axis.
struct TextureSpec {
  double period_m = 8.0;
  double low = 0.2;
  double high = 0.8;
};

struct BoxSpec {
  Point3<double> center;  // World frame, meters.
  Point3<double> size;    // Full extents along x, y, z.
  std::int32_t class_id = kCar;
  double albedo = 1.0;
};

struct SceneSpec {
  CameraRig rig;
  Intrinsics intrinsics;
  TextureSpec texture;
  std::vector<BoxSpec> boxes;
  Taxonomy taxonomy = DefaultTaxonomy();
  double noise_sigma = 0.0;  // Additive image noise.
  Point3<double> light_dir{0.3, -1.0, -0.5};  // Towards the light.
  double ambient = 0.35;

  // Throws unless the rig, intrinsics and boxes are consistent.
  void Validate() const;
};

struct RenderedFrame {
  ImageGrid image;  // 1 channel, [0, 1].
  ImageGrid depth;  // z in the camera frame; 0 where invalid.
  ValidMask valid;  // Set where a surface was hit.
  PanopticMap panoptic;
};

// Throws kContractViolation when the camera is on or below the ground, or
// inside a box.
RenderedFrame Render(const SceneSpec& spec, const PoseSE3& camera_to_world,
                     std::uint64_t seed = 0);

struct RenderedPair {
  RenderedFrame target;
  RenderedFrame source;
  PoseSE3 target_to_source;
};

// The source camera sits at camera_to_world_target * target_to_source^-1.
RenderedPair RenderPair(const SceneSpec& spec,
                        const PoseSE3& camera_to_world_target,
                        const PoseSE3& target_to_source,
                        std::uint64_t seed = 0);

// Counter-based standard normal sample; independent across (seed, index).
double CounterNormal(std::uint64_t seed, std::uint64_t index);

// Multiplies each valid depth by (1 + sigma * N(0, 1)).
ImageGrid AddMultiplicativeNoise(const ImageGrid& depth, double sigma,
                                 std::uint64_t seed);

}  // namespace panodepth

#endif  // PANODEPTH_SYNTHETIC_H_
