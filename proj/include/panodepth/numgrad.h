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

// Directional derivatives through dual numbers, and the central finite
// difference used to check them.

#ifndef PANODEPTH_NUMGRAD_H_
#define PANODEPTH_NUMGRAD_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "panodepth/dual.h"
#include "panodepth/error.h"

namespace panodepth {

// `f` must accept std::vector<Dual> and return Dual.
template <typename F>
double DirectionalDerivative(F&& f, std::span<const double> x,
                             std::span<const double> dir) {
  Require(x.size() == dir.size(), "directional_derivative: size mismatch");
  std::vector<Dual> seeded(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) seeded[i] = Dual(x[i], dir[i]);
  const Dual out = f(seeded);
  if (!isfinite(out)) {
    Fail(ErrorCode::kDegenerateInput, "directional_derivative: non-finite");
  }
  return out.deriv;
}

// `f` must accept std::vector<double> and return double.
template <typename F>
double FiniteDifference(F&& f, std::span<const double> x,
                        std::span<const double> dir, double step = 1e-4) {
  Require(x.size() == dir.size(), "finite_difference: size mismatch");
  std::vector<double> plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus[i] += step * dir[i];
    minus[i] -= step * dir[i];
  }
  return (f(plus) - f(minus)) / (2.0 * step);
}

inline double GradientRelativeError(double dual, double fd) {
  return std::abs(dual - fd) / std::max(1.0, std::abs(fd));
}

}  // namespace panodepth

#endif  // PANODEPTH_NUMGRAD_H_
