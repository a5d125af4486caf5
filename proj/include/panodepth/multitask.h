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

// Homoscedastic uncertainty weighting of the five loss components. Each term
// is scaled by exp(-s_i) and a fixed factor; 0.5 * sum(s_i) regularizes.

#ifndef PANODEPTH_MULTITASK_H_
#define PANODEPTH_MULTITASK_H_

#include <array>
#include <cmath>

#include "panodepth/dual.h"
#include "panodepth/error.h"

namespace panodepth {

inline constexpr int kNumLossTerms = 5;

// Order: seg, mse, l1, phot, smooth.
template <typename T>
struct LossComponents {
  T seg{}, mse{}, l1{}, phot{}, smooth{};

  std::array<T, kNumLossTerms> AsArray() const {
    return {seg, mse, l1, phot, smooth};
  }
};

// Multiplier in front of exp(-s_i) * L_i. The segmentation term has no 0.5.
inline constexpr std::array<double, kNumLossTerms> kUncertaintyTermFactors = {
    1.0, 0.5 * 200.0, 0.5 * 0.01, 0.5, 0.5 * 0.001};

struct UncertaintyParams {
  std::array<double, kNumLossTerms> s{};
};

template <LossScalar T>
T CombinedLoss(const LossComponents<T>& losses,
               const std::array<T, kNumLossTerms>& s) {
  const auto l = losses.AsArray();
  T total(0.0);
  T regularizer(0.0);
  for (int i = 0; i < kNumLossTerms; ++i) {
    if (!isfinite(l[i]) || !isfinite(s[i])) {
      Fail(ErrorCode::kContractViolation, "combined_loss: non-finite input");
    }
    total += kUncertaintyTermFactors[i] * exp(-s[i]) * l[i];
    regularizer += s[i];
  }
  return total + 0.5 * regularizer;
}

inline double CombinedLoss(const LossComponents<double>& losses,
                           const UncertaintyParams& params) {
  return CombinedLoss<double>(losses, params.s);
}

// Closed-form minimizer of term i in s at a fixed loss value:
// exp(s) = 2 * factor_i * L_i.
inline double OptimalLogVariance(int term, double loss) {
  Require(term >= 0 && term < kNumLossTerms, "term index out of range");
  Require(loss > 0.0, "optimal log-variance needs a positive loss");
  return std::log(2.0 * kUncertaintyTermFactors[term] * loss);
}

}  // namespace panodepth

#endif  // PANODEPTH_MULTITASK_H_
