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

// JSON forms of the configuration and result types.

#ifndef PANODEPTH_SERIALIZATION_H_
#define PANODEPTH_SERIALIZATION_H_

#include <string>

#include "json.hpp"
#include "panodepth/camera.h"
#include "panodepth/depth_losses.h"
#include "panodepth/evaluation.h"
#include "panodepth/geometric_scaling.h"
#include "panodepth/multitask.h"
#include "panodepth/panoptic_losses.h"
#include "panodepth/panoptic_map.h"
#include "panodepth/synthetic.h"

namespace panodepth {

using Json = nlohmann::json;

void to_json(Json& j, const Intrinsics& k);
void from_json(const Json& j, Intrinsics& k);

// {"rotation": [9 values, row-major], "translation": [x, y, z]}.
void to_json(Json& j, const PoseSE3& pose);
void from_json(const Json& j, PoseSE3& pose);

void to_json(Json& j, const PhotometricConfig& cfg);
void from_json(const Json& j, PhotometricConfig& cfg);

void to_json(Json& j, const BootstrapConfig& cfg);
void from_json(const Json& j, BootstrapConfig& cfg);

// {"s": [s0, s1, s2, s3, s4]}.
void to_json(Json& j, const UncertaintyParams& params);
void from_json(const Json& j, UncertaintyParams& params);

void to_json(Json& j, const Taxonomy& taxonomy);
void from_json(const Json& j, Taxonomy& taxonomy);

void to_json(Json& j, const SceneSpec& spec);
void from_json(const Json& j, SceneSpec& spec);

void to_json(Json& j, const PQResult& result);
void to_json(Json& j, const DepthMetrics& metrics);

// Parse a file; malformed JSON or schema violations become kIo errors.
Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& j);

template <typename T>
T ParseJson(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kIo, "malformed " + what + ": " + e.what());
  }
}

}  // namespace panodepth

#endif  // PANODEPTH_SERIALIZATION_H_
