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

// Randomized dual-number vs finite-difference checks for every scalar loss.

#ifndef PANODEPTH_GRADCHECK_H_
#define PANODEPTH_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

namespace panodepth {

struct GradcheckConfig {
  int trials = 100;
  std::uint64_t seed = 1;
  double step = 1e-4;
  double tolerance = 1e-4;
  // Trials with a kink (abs, min, top-K boundary, bilinear cell edge) within
  // this distance along the test direction are redrawn.
  double kink_margin = 1e-3;
};

struct GradcheckReport {
  std::string name;
  int trials = 0;
  int rejected = 0;  // Redrawn for lying near a kink.
  int failures = 0;
  double max_rel_error = 0.0;

  bool passed() const { return failures == 0 && trials > 0; }
};

// One report per loss: bootstrapped CE, panoptic, photometric, masked
// photometric, smoothness, depth, combined.
std::vector<GradcheckReport> RunGradientSuite(const GradcheckConfig& cfg = {});

}  // namespace panodepth

#endif  // PANODEPTH_GRADCHECK_H_
