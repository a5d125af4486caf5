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

#include "panodepth/serialization.h"

#include <fstream>

namespace panodepth {
namespace {

Json ToArray(const Point3<double>& p) { return Json::array({p.x, p.y, p.z}); }

Point3<double> FromArray(const Json& j) {
  if (!j.is_array() || j.size() != 3)
    throw Json::type_error::create(302, "expected a 3-vector", &j);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void ReadOptional(const Json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j[key].is_null()) {
    out = j[key].get<T>();
  } else {
    out.reset();
  }
}

}  // namespace

void to_json(Json& j, const Intrinsics& k) {
  j = {{"fx", k.fx}, {"fy", k.fy},       {"cx", k.cx},
       {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
}

void from_json(const Json& j, Intrinsics& k) {
  j.at("fx").get_to(k.fx);
  j.at("fy").get_to(k.fy);
  j.at("cx").get_to(k.cx);
  j.at("cy").get_to(k.cy);
  j.at("width").get_to(k.width);
  j.at("height").get_to(k.height);
}

void to_json(Json& j, const PoseSE3& pose) {
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot.push_back(pose.rotation(r, c));
  j = {{"rotation", rot},
       {"translation",
        {pose.translation(0), pose.translation(1), pose.translation(2)}}};
}

void from_json(const Json& j, PoseSE3& pose) {
  const Json& rot = j.at("rotation");
  const Json& t = j.at("translation");
  if (!rot.is_array() || rot.size() != 9 || !t.is_array() || t.size() != 3)
    throw Json::type_error::create(302, "pose needs 9 + 3 values", &j);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) pose.rotation(r, c) = rot[3 * r + c].get<double>();
  for (int i = 0; i < 3; ++i) pose.translation(i) = t[i].get<double>();
  pose.Validate();
}

void to_json(Json& j, const PhotometricConfig& cfg) {
  j = {{"alpha", cfg.alpha},
       {"ssim_window", cfg.ssim_window},
       {"c1", cfg.c1},
       {"c2", cfg.c2}};
}

void from_json(const Json& j, PhotometricConfig& cfg) {
  const PhotometricConfig d;
  cfg.alpha = j.value("alpha", d.alpha);
  cfg.ssim_window = j.value("ssim_window", d.ssim_window);
  cfg.c1 = j.value("c1", d.c1);
  cfg.c2 = j.value("c2", d.c2);
}

void to_json(Json& j, const BootstrapConfig& cfg) {
  j = {{"top_fraction", cfg.top_fraction},
       {"small_area_threshold", cfg.small_area_threshold},
       {"small_weight", cfg.small_weight},
       {"ignore_label", cfg.ignore_label}};
}

void from_json(const Json& j, BootstrapConfig& cfg) {
  const BootstrapConfig d;
  cfg.top_fraction = j.value("top_fraction", d.top_fraction);
  cfg.small_area_threshold =
      j.value("small_area_threshold", d.small_area_threshold);
  cfg.small_weight = j.value("small_weight", d.small_weight);
  cfg.ignore_label = j.value("ignore_label", d.ignore_label);
}

void to_json(Json& j, const UncertaintyParams& params) {
  j = {{"s", params.s}};
}

void from_json(const Json& j, UncertaintyParams& params) {
  const Json& s = j.at("s");
  if (!s.is_array() || s.size() != kNumLossTerms)
    throw Json::type_error::create(302, "\"s\" needs 5 values", &j);
  for (int i = 0; i < kNumLossTerms; ++i) params.s[i] = s[i].get<double>();
}

void to_json(Json& j, const Taxonomy& t) {
  Json names = Json::object();
  for (const auto& [id, name] : t.names) names[std::to_string(id)] = name;
  j = {{"thing_ids", t.thing_ids},
       {"stuff_ids", t.stuff_ids},
       {"ignore_label", t.ignore_label},
       {"names", names}};
  j["road_id"] = t.road_id ? Json(*t.road_id) : Json(nullptr);
  j["sky_id"] = t.sky_id ? Json(*t.sky_id) : Json(nullptr);
  j["ego_car_id"] = t.ego_car_id ? Json(*t.ego_car_id) : Json(nullptr);
}

void from_json(const Json& j, Taxonomy& t) {
  j.at("thing_ids").get_to(t.thing_ids);
  j.at("stuff_ids").get_to(t.stuff_ids);
  ReadOptional(j, "road_id", t.road_id);
  ReadOptional(j, "sky_id", t.sky_id);
  ReadOptional(j, "ego_car_id", t.ego_car_id);
  t.ignore_label = j.value("ignore_label", 255);
  t.names.clear();
  if (j.contains("names")) {
    for (const auto& [key, value] : j.at("names").items())
      t.names[std::stoi(key)] = value.get<std::string>();
  }
}

void to_json(Json& j, const SceneSpec& spec) {
  Json boxes = Json::array();
  for (const auto& b : spec.boxes) {
    boxes.push_back({{"center", ToArray(b.center)},
                     {"size", ToArray(b.size)},
                     {"class_id", b.class_id},
                     {"albedo", b.albedo}});
  }
  j = {{"camera_height", spec.rig.height_m},
       {"intrinsics", spec.intrinsics},
       {"texture",
        {{"period_m", spec.texture.period_m},
         {"low", spec.texture.low},
         {"high", spec.texture.high}}},
       {"boxes", boxes},
       {"taxonomy", spec.taxonomy},
       {"noise_sigma", spec.noise_sigma},
       {"light_dir", ToArray(spec.light_dir)},
       {"ambient", spec.ambient}};
}

void from_json(const Json& j, SceneSpec& spec) {
  const SceneSpec d;
  spec.rig.height_m = j.at("camera_height").get<double>();
  j.at("intrinsics").get_to(spec.intrinsics);
  if (j.contains("texture")) {
    const Json& t = j.at("texture");
    spec.texture.period_m = t.value("period_m", d.texture.period_m);
    spec.texture.low = t.value("low", d.texture.low);
    spec.texture.high = t.value("high", d.texture.high);
  }
  spec.boxes.clear();
  if (j.contains("boxes")) {
    for (const Json& b : j.at("boxes")) {
      spec.boxes.push_back({FromArray(b.at("center")), FromArray(b.at("size")),
                            b.value("class_id", kCar), b.value("albedo", 1.0)});
    }
  }
  spec.taxonomy = j.contains("taxonomy") ? j.at("taxonomy").get<Taxonomy>()
                                         : DefaultTaxonomy();
  spec.noise_sigma = j.value("noise_sigma", 0.0);
  spec.light_dir =
      j.contains("light_dir") ? FromArray(j.at("light_dir")) : d.light_dir;
  spec.ambient = j.value("ambient", d.ambient);
}

void to_json(Json& j, const PQResult& r) {
  Json per_class = Json::object();
  for (const auto& [id, c] : r.per_class) {
    per_class[std::to_string(id)] = {{"pq", c.pq}, {"sq", c.sq}, {"rq", c.rq},
                                     {"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  }
  j = {{"pq", r.pq},          {"sq", r.sq},
       {"rq", r.rq},          {"pq_things", r.pq_things},
       {"pq_stuff", r.pq_stuff}, {"tp", r.tp},
       {"fp", r.fp},          {"fn", r.fn},
       {"per_class", per_class}};
}

void to_json(Json& j, const DepthMetrics& m) {
  j = {{"abs_rel", m.abs_rel}, {"rmse", m.rmse},     {"delta1", m.delta1},
       {"delta2", m.delta2},   {"delta3", m.delta3}, {"count", m.count}};
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorCode::kIo, "cannot open for reading: " + path);
  try {
    return Json::parse(is);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kIo, "malformed JSON in " + path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) Fail(ErrorCode::kIo, "cannot open for writing: " + path);
  os << j.dump(2) << "\n";
  if (!os) Fail(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace panodepth
