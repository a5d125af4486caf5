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

#include "panodepth/panoptic_map.h"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace panodepth {

bool Taxonomy::IsThing(std::int32_t id) const {
  return std::find(thing_ids.begin(), thing_ids.end(), id) != thing_ids.end();
}

bool Taxonomy::IsStuff(std::int32_t id) const {
  return std::find(stuff_ids.begin(), stuff_ids.end(), id) != stuff_ids.end();
}

std::int32_t Taxonomy::NumClasses() const {
  std::int32_t n = 0;
  for (auto id : thing_ids) n = std::max(n, id + 1);
  for (auto id : stuff_ids) n = std::max(n, id + 1);
  return n;
}

void Taxonomy::Validate() const {
  std::set<std::int32_t> seen;
  for (auto id : thing_ids) {
    Require(id >= 0 && seen.insert(id).second,
            "taxonomy: duplicate or negative thing id");
  }
  for (auto id : stuff_ids) {
    Require(id >= 0 && seen.insert(id).second,
            "taxonomy: class listed twice or negative id");
  }
  Require(!seen.count(ignore_label), "taxonomy: ignore label is a class id");
  for (const auto& special : {road_id, sky_id, ego_car_id}) {
    if (special) Require(IsStuff(*special), "taxonomy: special class not stuff");
  }
}

Taxonomy DefaultTaxonomy() {
  Taxonomy t;
  t.stuff_ids = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 19};
  t.thing_ids = {11, 12, 13, 14, 15, 16, 17, 18};
  t.road_id = kRoad;
  t.sky_id = kSky;
  t.ego_car_id = kEgoCar;
  t.ignore_label = 255;
  t.names = {{0, "road"},        {1, "sidewalk"},   {2, "building"},
             {3, "wall"},        {4, "fence"},      {5, "pole"},
             {6, "traffic light"}, {7, "traffic sign"}, {8, "vegetation"},
             {9, "terrain"},     {10, "sky"},       {11, "person"},
             {12, "rider"},      {13, "car"},       {14, "truck"},
             {15, "bus"},        {16, "train"},     {17, "motorcycle"},
             {18, "bicycle"},    {19, "ego car"}};
  return t;
}

void PanopticMap::Validate() const {
  RequireSameShape(semantic, instance, "panoptic semantic vs instance");
  std::int32_t max_id = 0;
  std::set<std::int32_t> ids;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const std::int32_t id = instance.data()[i];
    if (id == 0) continue;
    Require(id > 0, "panoptic: negative instance id");
    Require(taxonomy.IsThing(semantic.data()[i]),
            "panoptic: instance id on a non-thing pixel");
    ids.insert(id);
    max_id = std::max(max_id, id);
  }
  Require(static_cast<std::size_t>(max_id) == ids.size(),
          "panoptic: instance ids are not dense");
}

std::int32_t CanonicalizeInstanceIds(LabelGrid& instance) {
  std::unordered_map<std::int32_t, std::int32_t> remap;
  std::int32_t next = 1;
  for (auto& id : instance.data()) {
    if (id <= 0) {
      id = 0;
      continue;
    }
    auto [it, inserted] = remap.try_emplace(id, next);
    if (inserted) ++next;
    id = it->second;
  }
  return next - 1;
}

}  // namespace panodepth
