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

#ifndef PANODEPTH_PANOPTIC_MAP_H_
#define PANODEPTH_PANOPTIC_MAP_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "panodepth/grid.h"

namespace panodepth {

// Class taxonomy: thing/stuff split plus the special classes used by depth
// scaling and 3D projection.
struct Taxonomy {
  std::vector<std::int32_t> thing_ids;
  std::vector<std::int32_t> stuff_ids;
  std::optional<std::int32_t> road_id;
  std::optional<std::int32_t> sky_id;
  std::optional<std::int32_t> ego_car_id;
  std::int32_t ignore_label = 255;
  std::map<std::int32_t, std::string> names;

  bool IsThing(std::int32_t id) const;
  bool IsStuff(std::int32_t id) const;
  bool IsKnown(std::int32_t id) const { return IsThing(id) || IsStuff(id); }
  std::int32_t NumClasses() const;  // max known id + 1

  // Thing and stuff sets disjoint; special classes are stuff.
  void Validate() const;

  bool operator==(const Taxonomy& other) const = default;
};

// Cityscapes-style train ids: road 0, building 2, sky 10, person 11, car 13,
// truck 14, with an ego-car class appended at 19.
Taxonomy DefaultTaxonomy();

// Class names for the default taxonomy.
inline constexpr std::int32_t kRoad = 0;
inline constexpr std::int32_t kSidewalk = 1;
inline constexpr std::int32_t kBuilding = 2;
inline constexpr std::int32_t kSky = 10;
inline constexpr std::int32_t kPerson = 11;
inline constexpr std::int32_t kCar = 13;
inline constexpr std::int32_t kTruck = 14;
inline constexpr std::int32_t kEgoCar = 19;

struct PanopticMap {
  LabelGrid semantic;
  LabelGrid instance;  // 0 = stuff or no instance.
  Taxonomy taxonomy;

  int height() const { return semantic.height(); }
  int width() const { return semantic.width(); }

  // Instance ids only on thing pixels; ids dense 1..M.
  void Validate() const;
};

// Relabels positive ids to 1..M in order of first appearance in a raster scan.
// Returns M.
std::int32_t CanonicalizeInstanceIds(LabelGrid& instance);

}  // namespace panodepth

#endif  // PANODEPTH_PANOPTIC_MAP_H_
