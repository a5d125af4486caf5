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

// Forward-mode dual numbers carrying one directional derivative.
//
// All scalar losses are written as templates over `double` and `Dual` so the
// same code path yields values and directional derivatives.

#ifndef PANODEPTH_DUAL_H_
#define PANODEPTH_DUAL_H_

#include <cmath>
#include <concepts>
#include <ostream>

namespace panodepth {

// Unqualified calls inside templates resolve to these for `double`.
using std::abs;
using std::cos;
using std::exp;
using std::floor;
using std::isfinite;
using std::log;
using std::sin;
using std::sqrt;

struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: implicit lift of constants.
  constexpr Dual(double v, double d) : value(v), deriv(d) {}

  constexpr Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }
};

template <typename T>
concept LossScalar = std::same_as<T, double> || std::same_as<T, Dual>;

constexpr Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }
constexpr Dual operator+(Dual a, double b) { return a += Dual(b); }
constexpr Dual operator+(double a, Dual b) { return b += Dual(a); }
constexpr Dual operator-(Dual a, double b) { return a -= Dual(b); }
constexpr Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
constexpr Dual operator*(const Dual& a, double b) {
  return {a.value * b, a.deriv * b};
}
constexpr Dual operator*(double a, const Dual& b) {
  return {a * b.value, a * b.deriv};
}
constexpr Dual operator/(const Dual& a, double b) {
  return {a.value / b, a.deriv / b};
}
constexpr Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

// Comparisons look at the value only.
constexpr bool operator<(const Dual& a, const Dual& b) {
  return a.value < b.value;
}
constexpr bool operator>(const Dual& a, const Dual& b) {
  return a.value > b.value;
}
constexpr bool operator<=(const Dual& a, const Dual& b) {
  return a.value <= b.value;
}
constexpr bool operator>=(const Dual& a, const Dual& b) {
  return a.value >= b.value;
}

inline Dual exp(const Dual& a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}
inline Dual log(const Dual& a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}
inline Dual sin(const Dual& a) {
  return {std::sin(a.value), std::cos(a.value) * a.deriv};
}
inline Dual cos(const Dual& a) {
  return {std::cos(a.value), -std::sin(a.value) * a.deriv};
}
// Subgradient 0 at the kink.
inline Dual abs(const Dual& a) {
  if (a.value > 0.0) return a;
  if (a.value < 0.0) return -a;
  return {0.0, 0.0};
}
inline Dual floor(const Dual& a) { return {std::floor(a.value), 0.0}; }
inline bool isfinite(const Dual& a) {
  return std::isfinite(a.value) && std::isfinite(a.deriv);
}

inline std::ostream& operator<<(std::ostream& os, const Dual& a) {
  return os << a.value << " + " << a.deriv << "e";
}

constexpr double ValueOf(double a) { return a; }
constexpr double ValueOf(const Dual& a) { return a.value; }
constexpr double DerivOf(double) { return 0.0; }
constexpr double DerivOf(const Dual& a) { return a.deriv; }

// Ties select the first operand, so the derivative follows it.
template <LossScalar T>
constexpr T Min(const T& a, const T& b) {
  return b < a ? b : a;
}
template <LossScalar T>
constexpr T Max(const T& a, const T& b) {
  return b > a ? b : a;
}

// Clamp that propagates the derivative only inside the open interval.
template <LossScalar T>
constexpr T Clamp(const T& a, double lo, double hi) {
  if (ValueOf(a) < lo) return T(lo);
  if (ValueOf(a) > hi) return T(hi);
  return a;
}

}  // namespace panodepth

#endif  // PANODEPTH_DUAL_H_
