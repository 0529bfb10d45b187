// Copyright 2026 The hillmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HILL_SPECIAL_HPP_
#define HILL_SPECIAL_HPP_

// Regularized incomplete beta function and its inverse.

#include <algorithm>
#include <cmath>
#include <limits>

#include "hill/error.hpp"

namespace hill::special {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
inline double beta_continued_fraction(double a, double b, double x,
                                      double rel_tol) {
  constexpr int kMaxIter = 10000;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < rel_tol) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge",
                         h);
}

}  // namespace detail

// I_x(a, b) for a, b > 0 and x in [0, 1].
inline double incomplete_beta(double a, double b, double x,
                              double rel_tol = 1e-12) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("incomplete_beta: shape parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x, rel_tol) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x, rel_tol) / b;
}

inline double beta_density(double a, double b, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  log_beta(a, b));
}

// Smallest x with I_x(a, b) >= p. Halley refinement from the usual
// normal/power-law starting guesses, with a bisection fallback.
inline double inverse_incomplete_beta(double a, double b, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w) {
      x = std::pow(a * w * p, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
  }
  const double afac = -log_beta(a, b);
  for (int j = 0; j < 20; ++j) {
    if (x <= 0.0 || x >= 1.0) break;
    const double err = incomplete_beta(a, b, x, 1e-15) - p;
    double t = std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) +
                        afac);
    const double u = err / t;
    t = u / (1.0 - 0.5 * std::min(1.0, u * ((a - 1.0) / x - (b - 1.0) / (1.0 - x))));
    x -= t;
    if (x <= 0.0) x = 0.5 * (x + t);
    if (x >= 1.0) x = 0.5 * (x + t + 1.0);
    if (std::abs(t) < 1e-14 * x && j > 0) break;
  }
  if (x > 0.0 && x < 1.0 && std::abs(incomplete_beta(a, b, x, 1e-15) - p) < 1e-10) {
    return x;
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-300; ++i) {
    const double mid = lo > 0.0 && hi / lo > 4.0 ? std::sqrt(lo * hi)
                                                 : 0.5 * (lo + hi);
    const double mid_safe = mid > 0.0 ? mid : 0.5 * hi;
    if (incomplete_beta(a, b, mid_safe, 1e-15) < p) {
      lo = mid_safe;
    } else {
      hi = mid_safe;
    }
    if (hi - lo <= 1e-16 * hi) break;
  }
  return hi;
}

}  // namespace hill::special

#endif  // HILL_SPECIAL_HPP_
