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

#ifndef HILL_QUADRATURE_HPP_
#define HILL_QUADRATURE_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "hill/error.hpp"

namespace hill {

// Controls for adaptive Simpson integration. The integrand must be smooth
// between consecutive breakpoints; kinks and jumps belong in `breakpoints`.
struct QuadratureSpec {
  double abs_tol = 1e-9;
  int max_depth = 40;
  std::vector<double> breakpoints;

  QuadratureSpec() = default;
  QuadratureSpec(double tol, int depth, std::vector<double> points = {})
      : abs_tol(tol), max_depth(depth), breakpoints(std::move(points)) {
    normalize();
  }

  // Sorts and deduplicates the breakpoints, validating the tolerance.
  void normalize() {
    if (!(abs_tol > 0.0)) throw DomainError("quadrature abs_tol must be > 0");
    if (max_depth < 1) throw DomainError("quadrature max_depth must be >= 1");
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
  }

  QuadratureSpec with_breakpoints(std::span<const double> extra) const {
    QuadratureSpec out = *this;
    out.breakpoints.insert(out.breakpoints.end(), extra.begin(), extra.end());
    out.normalize();
    return out;
  }

  // Same spec with the tolerance divided by `factor`.
  QuadratureSpec tightened(double factor) const {
    QuadratureSpec out = *this;
    out.abs_tol /= factor;
    return out;
  }
};

namespace detail {

template <typename F>
struct SimpsonState {
  F& f;
  int max_depth;
  bool failed = false;
};

template <typename F>
double simpson_recurse(SimpsonState<F>& st, double a, double b, double fa,
                       double fm, double fb, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double h = (b - a) / 12.0;
  const double left = h * (fa + 4.0 * flm + fm);
  const double right = h * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth) {
    st.failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

template <typename F>
double simpson_segment(SimpsonState<F>& st, double a, double b, double tol) {
  const double fa = st.f(a);
  const double fb = st.f(b);
  const double fm = st.f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(st, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace detail

// Adaptive Simpson estimate of the integral of `f` over [lo, hi], split at
// every breakpoint strictly inside the interval. The absolute tolerance is
// split evenly between segments, so tiny segments near a singular endpoint
// are not starved of accuracy.
template <typename F>
double integrate(F&& f, double lo, double hi, const QuadratureSpec& spec) {
  if (!(lo <= hi)) {
    std::ostringstream os;
    os << "integrate: lo (" << lo << ") > hi (" << hi << ")";
    throw DomainError(os.str());
  }
  if (lo == hi) return 0.0;
  std::vector<double> cuts;
  cuts.reserve(spec.breakpoints.size() + 2);
  cuts.push_back(lo);
  auto first = std::upper_bound(spec.breakpoints.begin(),
                                spec.breakpoints.end(), lo);
  for (auto it = first; it != spec.breakpoints.end() && *it < hi; ++it) {
    cuts.push_back(*it);
  }
  cuts.push_back(hi);

  detail::SimpsonState<std::remove_reference_t<F>> st{f, spec.max_depth};
  const double seg_tol = spec.abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    total += detail::simpson_segment(st, a, b, seg_tol);
  }
  if (st.failed) {
    std::ostringstream os;
    os << "adaptive Simpson exceeded max_depth " << spec.max_depth
       << " on [" << lo << ", " << hi << "]";
    throw ConvergenceError(os.str(), total);
  }
  return total;
}

}  // namespace hill

#endif  // HILL_QUADRATURE_HPP_
