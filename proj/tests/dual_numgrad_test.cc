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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "panodepth/dual.h"
#include "panodepth/error.h"
#include "panodepth/gradcheck.h"
#include "panodepth/numgrad.h"

namespace panodepth {
namespace {

TEST(Dual, ArithmeticRules) {
  const Dual a(2.0, 3.0), b(5.0, -1.0);
  EXPECT_EQ((a + b).deriv, 2.0);
  EXPECT_EQ((a - b).deriv, 4.0);
  EXPECT_EQ((a * b).deriv, 3.0 * 5.0 + 2.0 * -1.0);
  EXPECT_DOUBLE_EQ((a / b).deriv, (3.0 * 5.0 - 2.0 * -1.0) / 25.0);
  EXPECT_EQ((2.0 * a).deriv, 6.0);
  EXPECT_EQ((1.0 - a).deriv, -3.0);
  EXPECT_DOUBLE_EQ((1.0 / a).deriv, -3.0 / 4.0);
  EXPECT_DOUBLE_EQ(exp(a).deriv, std::exp(2.0) * 3.0);
  EXPECT_DOUBLE_EQ(log(a).deriv, 1.5);
  EXPECT_DOUBLE_EQ(sqrt(a).deriv, 3.0 / (2.0 * std::sqrt(2.0)));
  EXPECT_DOUBLE_EQ(sin(a).deriv, std::cos(2.0) * 3.0);
  EXPECT_DOUBLE_EQ(cos(a).deriv, -std::sin(2.0) * 3.0);
  EXPECT_EQ(abs(Dual(-2.0, 3.0)).deriv, -3.0);
  EXPECT_EQ(floor(Dual(2.7, 1.0)).deriv, 0.0);
}

TEST(Dual, NonSmoothConventions) {
  EXPECT_EQ(abs(Dual(0.0, 5.0)).deriv, 0.0);
  const Dual a(1.0, 1.0), b(1.0, 2.0);
  EXPECT_EQ(Min(a, b).deriv, 1.0);
  EXPECT_EQ(Max(a, b).deriv, 1.0);
  EXPECT_EQ(Min(b, a).deriv, 2.0);
  EXPECT_EQ(Min(Dual(0.5, 7.0), b).deriv, 7.0);
  EXPECT_EQ(Clamp(Dual(2.0, 1.0), 0.0, 1.0).deriv, 0.0);
  EXPECT_EQ(Clamp(Dual(0.5, 1.0), 0.0, 1.0).deriv, 1.0);
  EXPECT_TRUE(Dual(1.0) < Dual(2.0, -100.0));
  EXPECT_FALSE(isfinite(Dual(NAN)));
  EXPECT_FALSE(isfinite(Dual(1.0, INFINITY)));
}

TEST(DirectionalDerivative, Examples) {
  auto sq = [](const auto& x) { return x[0] * x[0]; };
  EXPECT_EQ(DirectionalDerivative(sq, std::vector<double>{3.0},
                                  std::vector<double>{1.0}),
            6.0);
  auto ex = [](const auto& x) { return exp(x[0]); };
  EXPECT_EQ(DirectionalDerivative(ex, std::vector<double>{0.0},
                                  std::vector<double>{1.0}),
            1.0);
  auto bad = [](const auto& x) { return log(x[0]); };
  EXPECT_THROW(DirectionalDerivative(bad, std::vector<double>{-1.0},
                                     std::vector<double>{1.0}),
               Error);
  EXPECT_THROW(DirectionalDerivative(sq, std::vector<double>{1.0},
                                     std::vector<double>{1.0, 2.0}),
               Error);
}

TEST(FiniteDifference, Examples) {
  auto s = [](const auto& x) { return std::sin(x[0]); };
  EXPECT_NEAR(FiniteDifference(s, std::vector<double>{0.0},
                               std::vector<double>{1.0}),
              1.0, 1e-8);
  auto lin = [](const auto& x) { return 3.0 * x[0] - 2.0 * x[1] + 1.0; };
  for (double step : {1e-6, 1e-3, 0.5, 7.0}) {
    EXPECT_NEAR(FiniteDifference(lin, std::vector<double>{0.25, -0.5},
                                 std::vector<double>{1.0, 1.0}, step),
                1.0, 1e-9);
  }
}

TEST(FiniteDifference, AgreesWithDualOnRandomQuadratics) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int n = 6;
    std::vector<double> a(n * n), b(n), x(n), dir(n);
    for (auto& v : a) v = dist(rng);
    for (auto& v : b) v = dist(rng);
    for (auto& v : x) v = dist(rng);
    for (auto& v : dir) v = dist(rng);
    auto f = [&](const auto& p) {
      using T = std::decay_t<decltype(p[0])>;
      T acc(0.0);
      for (int i = 0; i < n; ++i) {
        acc += b[i] * p[i];
        for (int j = 0; j < n; ++j) acc += a[i * n + j] * p[i] * p[j];
      }
      return acc;
    };
    EXPECT_NEAR(DirectionalDerivative(f, x, dir), FiniteDifference(f, x, dir),
                1e-8);
  }
}

TEST(GradientSuite, AllLossesPass) {
  GradcheckConfig cfg;
  cfg.trials = 20;
  const auto reports = RunGradientSuite(cfg);
  ASSERT_EQ(reports.size(), 7u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed()) << r.name << " max " << r.max_rel_error;
    EXPECT_EQ(r.trials, 20) << r.name;
  }
}

}  // namespace
}  // namespace panodepth
