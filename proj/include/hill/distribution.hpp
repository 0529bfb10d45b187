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

#ifndef HILL_DISTRIBUTION_HPP_
#define HILL_DISTRIBUTION_HPP_

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hill/error.hpp"
#include "hill/quadrature.hpp"
#include "hill/rng.hpp"
#include "hill/special.hpp"

namespace hill {

// Prior law F of option rewards on [0, 1]. Immutable after construction;
// safe to share between threads.
class RewardDistribution {
 public:
  struct Uniform {};
  struct Beta {
    double alpha;
    double beta;
  };
  // Piecewise-linear CDF through (grid[i], cdf[i]).
  struct Empirical {
    std::vector<double> grid;
    std::vector<double> cdf;
  };
  using Kind = std::variant<Uniform, Beta, Empirical>;

  static RewardDistribution uniform() { return RewardDistribution(Uniform{}); }

  static RewardDistribution beta(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
        !std::isfinite(beta)) {
      throw DomainError("beta distribution needs finite positive shapes");
    }
    return RewardDistribution(Beta{alpha, beta});
  }

  // Beta law with the given mean and alpha + beta = concentration.
  static RewardDistribution beta_with_mean(double mean,
                                           double concentration = 5.0) {
    if (!(mean > 0.0 && mean < 1.0)) {
      throw DomainError("beta_with_mean: mean must lie in (0, 1)");
    }
    return beta(mean * concentration, (1.0 - mean) * concentration);
  }

  static RewardDistribution empirical(std::vector<double> grid,
                                      std::vector<double> cdf) {
    validate_empirical(grid, cdf);
    return RewardDistribution(Empirical{std::move(grid), std::move(cdf)});
  }

  const Kind& kind() const { return kind_; }
  bool is_empirical() const { return std::holds_alternative<Empirical>(kind_); }

  double cdf(double r) const {
    if (!(r >= 0.0 && r <= 1.0)) {
      std::ostringstream os;
      os << "cdf argument " << r << " outside [0, 1]";
      throw DomainError(os.str());
    }
    return cdf_unchecked(r);
  }

  // Hot-path evaluation for callers that already guarantee r in [0, 1].
  double cdf_unchecked(double r) const {
    if (const auto* e = std::get_if<Empirical>(&kind_)) {
      const auto& g = e->grid;
      if (r >= 1.0) return 1.0;
      auto it = std::upper_bound(g.begin(), g.end(), r);
      const std::size_t hi = static_cast<std::size_t>(it - g.begin());
      const std::size_t lo = hi - 1;
      const double w = (r - g[lo]) / (g[hi] - g[lo]);
      return e->cdf[lo] + w * (e->cdf[hi] - e->cdf[lo]);
    }
    if (const auto* b = std::get_if<Beta>(&kind_)) {
      return special::incomplete_beta(b->alpha, b->beta, r);
    }
    return r;
  }

  double mean() const { return mean_; }

  // Inverse CDF: smallest r with F(r) >= u.
  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level outside [0, 1]");
    if (const auto* e = std::get_if<Empirical>(&kind_)) {
      const auto& c = e->cdf;
      if (u <= c.front()) return 0.0;
      auto it = std::lower_bound(c.begin(), c.end(), u);
      const std::size_t hi = static_cast<std::size_t>(it - c.begin());
      const std::size_t lo = hi - 1;
      const double w = (u - c[lo]) / (c[hi] - c[lo]);
      return e->grid[lo] + w * (e->grid[hi] - e->grid[lo]);
    }
    if (const auto* b = std::get_if<Beta>(&kind_)) {
      return special::inverse_incomplete_beta(b->alpha, b->beta, u);
    }
    return u;
  }

  template <typename URBG>
  double sample(URBG& gen) const {
    return quantile(uniform01(gen));
  }

  // Points where integrands built from F may lose smoothness: the grid of an
  // empirical law, or a geometric ladder toward a singular Beta endpoint.
  const std::vector<double>& kinks() const { return kinks_; }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* e = std::get_if<Empirical>(&kind_)) {
      os << "empirical(points=" << e->grid.size() << ")";
    } else if (const auto* b = std::get_if<Beta>(&kind_)) {
      os << "beta(" << b->alpha << "," << b->beta << ")";
    } else {
      os << "uniform";
    }
    return os.str();
  }

 private:
  explicit RewardDistribution(Kind kind) : kind_(std::move(kind)) {
    build_kinks();
    if (const auto* b = std::get_if<Beta>(&kind_)) {
      mean_ = b->alpha / (b->alpha + b->beta);
    } else {
      QuadratureSpec spec(1e-12, 50, kinks_);
      mean_ = hill::integrate([this](double r) { return 1.0 - cdf_unchecked(r); },
                              0.0, 1.0, spec);
    }
  }

  void build_kinks() {
    if (const auto* e = std::get_if<Empirical>(&kind_)) {
      kinks_.assign(e->grid.begin() + 1, e->grid.end() - 1);
    } else if (const auto* b = std::get_if<Beta>(&kind_)) {
      for (int k = 1; k <= 60; ++k) {
        const double p = std::ldexp(1.0, -k);
        if (b->alpha < 1.0) kinks_.push_back(p);
        if (b->beta < 1.0) kinks_.push_back(1.0 - p);
      }
      std::sort(kinks_.begin(), kinks_.end());
      kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
    }
  }

  static void validate_empirical(const std::vector<double>& grid,
                                 const std::vector<double>& cdf) {
    if (grid.size() < 2) throw DomainError("empirical grid needs >= 2 points");
    if (grid.size() != cdf.size()) {
      throw DomainError("empirical grid and cdf lengths differ");
    }
    if (grid.front() != 0.0 || grid.back() != 1.0) {
      throw DomainError("empirical grid must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i]) || !std::isfinite(cdf[i])) {
        throw DomainError("empirical distribution has non-finite entries");
      }
      if (cdf[i] < 0.0 || cdf[i] > 1.0) {
        throw DomainError("empirical cdf values must lie in [0, 1]");
      }
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw DomainError("empirical grid must be strictly ascending");
      }
      if (i > 0 && cdf[i] < cdf[i - 1]) {
        throw DomainError("empirical cdf must be nondecreasing");
      }
    }
    if (cdf.back() != 1.0) throw DomainError("empirical cdf must reach 1 at r = 1");
  }

  Kind kind_;
  double mean_ = 0.0;
  std::vector<double> kinks_;
};

inline double cdf(const RewardDistribution& d, double r) { return d.cdf(r); }
inline double mean(const RewardDistribution& d) { return d.mean(); }

template <typename URBG>
double sample(const RewardDistribution& d, URBG& gen) {
  return d.sample(gen);
}

// Integral of `integrand` over [lo, hi] with the distribution's own kinks
// added to the breakpoints of `spec`.
template <typename F>
double integrate(const RewardDistribution& d, F&& integrand, double lo,
                 double hi, const QuadratureSpec& spec) {
  if (!(lo >= 0.0 && hi <= 1.0)) {
    throw DomainError("integration bounds must lie inside [0, 1]");
  }
  if (d.kinks().empty()) return integrate(std::forward<F>(integrand), lo, hi, spec);
  return integrate(std::forward<F>(integrand), lo, hi,
                   spec.with_breakpoints(d.kinks()));
}

// ---- r,cdf CSV -------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void save_cdf_csv(const RewardDistribution& d, std::ostream& out) {
  const auto* e = std::get_if<RewardDistribution::Empirical>(&d.kind());
  if (e == nullptr) throw DomainError("only empirical distributions serialize to r,cdf");
  out << "r,cdf\n";
  for (std::size_t i = 0; i < e->grid.size(); ++i) {
    out << format_double(e->grid[i]) << ',' << format_double(e->cdf[i]) << '\n';
  }
}

inline void save_cdf_csv(const RewardDistribution& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot open '" + path + "' for writing");
  save_cdf_csv(d, out);
}

namespace detail {

inline double parse_double_field(const std::string& field, int line) {
  if (field.empty()) throw LoadError("empty numeric field", line);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE) {
    throw LoadError("cannot parse number '" + field + "'", line);
  }
  return v;
}

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace detail

inline RewardDistribution load_cdf_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::vector<double> grid;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (detail::trim(line) != "r,cdf") {
        throw LoadError("expected header 'r,cdf'", lineno);
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw LoadError("expected two columns", lineno);
    grid.push_back(detail::parse_double_field(detail::trim(line.substr(0, comma)), lineno));
    values.push_back(detail::parse_double_field(detail::trim(line.substr(comma + 1)), lineno));
  }
  if (!header_seen) throw LoadError("empty distribution file");
  try {
    return RewardDistribution::empirical(std::move(grid), std::move(values));
  } catch (const DomainError& e) {
    throw LoadError(e.what());
  }
}

inline RewardDistribution load_cdf_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return load_cdf_csv(in);
}

}  // namespace hill

#endif  // HILL_DISTRIBUTION_HPP_
