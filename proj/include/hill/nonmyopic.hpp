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

#ifndef HILL_NONMYOPIC_HPP_
#define HILL_NONMYOPIC_HPP_

// Exploration thresholds and one-time communication mechanisms for
// non-myopic agents. Agents withhold what they find until the single
// permitted sharing slot T1, so the pre-T1 thresholds depend on the belief
// about other agents' best finds at T1 and form a coupled fixed point.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hill/distribution.hpp"
#include "hill/error.hpp"
#include "hill/quadrature.hpp"
#include "hill/thresholds.hpp"

namespace hill::nonmyopic {

// Law of an agent's best reward at the end of slot L when it follows the
// strictly decreasing prefix u_1 > ... > u_L on its own (u_0 = 1).
class BeliefCdf {
 public:
  BeliefCdf(const RewardDistribution& d, std::vector<double> prefix)
      : BeliefCdf(d, std::move(prefix), true) {}

  // Accepts ties between neighbouring thresholds. Used by solvers whose
  // intermediate iterates may touch; the formula stays a valid CDF.
  static BeliefCdf allowing_ties(const RewardDistribution& d,
                                 std::vector<double> prefix) {
    return BeliefCdf(d, std::move(prefix), false);
  }

  double operator()(double r) const {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("belief cdf: r outside [0, 1]");
    return eval(dist_.cdf_unchecked(r), branch(r));
  }

  // Branch t in 1..L covers u_t < r <= u_{t-1}; t = L + 1 covers r <= u_L.
  int branch(double r) const {
    // prefix_ is decreasing; count entries >= r.
    const auto it = std::partition_point(prefix_.begin(), prefix_.end(),
                                         [r](double u) { return u >= r; });
    return static_cast<int>(it - prefix_.begin()) + 1;
  }

  // G on branch t given F(r).
  double eval(double fr, int t) const {
    const double v = std::pow(fr, t) - (1.0 - fr) * suffix_[t - 1];
    return std::clamp(v, 0.0, 1.0);
  }

  const std::vector<double>& prefix() const { return prefix_; }
  int length() const { return static_cast<int>(prefix_.size()); }
  const RewardDistribution& base() const { return dist_; }

 private:
  BeliefCdf(const RewardDistribution& d, std::vector<double> prefix, bool strict)
      : dist_(d), prefix_(std::move(prefix)) {
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      if (!(prefix_[i] >= 0.0 && prefix_[i] <= 1.0)) {
        throw DomainError("belief cdf: thresholds must lie in [0, 1]");
      }
      if (i > 0) {
        const bool ok = strict ? prefix_[i] < prefix_[i - 1]
                               : prefix_[i] <= prefix_[i - 1];
        if (!ok) throw DomainError("belief cdf: threshold prefix must be decreasing");
      }
    }
    // suffix_[t-1] = sum_{i=t}^{L} F(u_i)^i, with suffix_[L] = 0.
    const std::size_t len = prefix_.size();
    suffix_.assign(len + 1, 0.0);
    for (std::size_t i = len; i-- > 0;) {
      suffix_[i] = suffix_[i + 1] +
                   std::pow(dist_.cdf_unchecked(prefix_[i]), static_cast<double>(i + 1));
    }
  }

  RewardDistribution dist_;
  std::vector<double> prefix_;
  std::vector<double> suffix_;
};

inline BeliefCdf belief_cdf(const RewardDistribution& d, std::vector<double> prefix) {
  return BeliefCdf(d, std::move(prefix));
}

// Solver controls shared by every threshold solver here.
struct SolverOptions {
  double tolerance = 1e-8;          // max-norm of the coupled residuals
  double scalar_tolerance = 1e-10;  // single-agent equations
  int max_iterations = 200;
  int scalar_max_iterations = 100;
  int max_case_flips = 50;  // before a coordinate falls back to bisection
  QuadratureSpec quadrature = QuadratureSpec(1e-11, 40);
};

// ∫_u^1 (1 - F(r)) dr.
inline double tail(const RewardDistribution& d, double u, const QuadratureSpec& spec) {
  return integrate(d, [&](double r) { return 1.0 - d.cdf_unchecked(r); }, u, 1.0, spec);
}

// Root of u - μ = k ∫_u^1 (1 - F) on [μ, 1]: safeguarded Newton with a
// bisection fallback. Returns the root and writes the final residual.
inline double solve_scalar_threshold(const RewardDistribution& d, int k,
                                     double guess, const SolverOptions& opt,
                                     double* residual_out = nullptr) {
  const double mu = d.mean();
  if (k == 0) {
    if (residual_out) *residual_out = 0.0;
    return mu;
  }
  auto g = [&](double u) { return u - mu - k * tail(d, u, opt.quadrature); };
  double lo = mu;
  double hi = 1.0;
  double u = std::clamp(guess, lo, hi);
  double gu = g(u);
  for (int it = 0; it < opt.scalar_max_iterations; ++it) {
    if (std::abs(gu) < opt.scalar_tolerance) {
      if (residual_out) *residual_out = gu;
      return u;
    }
    if (gu < 0.0) lo = u; else hi = u;
    const double slope = 1.0 + k * (1.0 - d.cdf_unchecked(u));
    double next = u - gu / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15) {
      next = 0.5 * (lo + hi);
      u = next;
      gu = g(u);
      break;
    }
    u = next;
    gu = g(u);
  }
  if (std::abs(gu) < opt.scalar_tolerance) {
    if (residual_out) *residual_out = gu;
    return u;
  }
  std::ostringstream os;
  os << "single-agent threshold with " << k << " remaining slots did not converge: u="
     << format_double(u) << " residual=" << format_double(gu) << " bracket=["
     << format_double(lo) << ", " << format_double(hi) << "]";
  throw SolverError(os.str(), {});
}

// Benchmark thresholds of one agent acting alone: ū_t - μ = (T - t)∫_ū^1 (1-F).
inline ThresholdSequence solve_single_agent(const RewardDistribution& d, int horizon,
                                            const SolverOptions& opt = {}) {
  if (horizon < 1) throw DomainError("solve_single_agent: T must be >= 1");
  ThresholdSequence seq;
  seq.horizon = horizon;
  seq.comm_slot = horizon;
  seq.values.assign(static_cast<std::size_t>(horizon), 0.0);
  seq.residuals.assign(static_cast<std::size_t>(horizon), 0.0);
  double guess = d.mean();
  // Solve from t = T backwards so each root seeds the next.
  for (int t = horizon; t >= 1; --t) {
    double res = 0.0;
    const double u = solve_scalar_threshold(d, horizon - t, guess, opt, &res);
    seq.values[t - 1] = u;
    seq.residuals[t - 1] = res;
    guess = u;
  }
  return seq;
}

// Fixed data of one pre-T1 system: everything except the prefix iterate.
class OneTimeSystem {
 public:
  OneTimeSystem(const RewardDistribution& d, int agents, int horizon, int comm_slot,
                std::vector<double> benchmark, QuadratureSpec spec)
      : d_(d), n_(agents), t_(horizon), t1_(comm_slot), mu_(d.mean()),
        spec_(std::move(spec)) {
    if (agents < 1) throw DomainError("N must be >= 1");
    if (comm_slot < 1 || comm_slot > horizon - 1) {
      throw DomainError("communication slot T1 must lie in [1, T-1]");
    }
    if (static_cast<int>(benchmark.size()) != horizon) {
      throw DomainError("benchmark sequence length must equal T");
    }
    post_.assign(benchmark.begin() + comm_slot, benchmark.end());
    benchmark_ = std::move(benchmark);
  }

  int comm_slot() const { return t1_; }
  double mu() const { return mu_; }
  const std::vector<double>& benchmark() const { return benchmark_; }

  // Number k of post-T1 benchmark thresholds strictly above r, which selects
  // the active branch: ū_{T1+k+1} <= r < ū_{T1+k}.
  int case_index(double r) const {
    const auto it = std::partition_point(post_.begin(), post_.end(),
                                         [r](double u) { return u > r; });
    return static_cast<int>(it - post_.begin());
  }

  // Residuals g_t(u) for t = 1..T1 of the whole prefix at once, plus the
  // diagonal of the Jacobian when `jacobian` is non-null.
  std::vector<double> residuals(const std::vector<double>& u,
                                std::vector<double>* jacobian = nullptr) const {
    const BeliefCdf g = BeliefCdf::allowing_ties(d_, u);
    const double lo = *std::min_element(u.begin(), u.end());
    const auto cuts = segment_cuts(u, lo);
    // Suffix integrals over segments: tail and weighted belief term.
    const std::size_t nseg = cuts.size() - 1;
    std::vector<double> tail_acc(cuts.size(), 0.0), belief_acc(cuts.size(), 0.0);
    QuadratureSpec seg_spec = spec_;
    seg_spec.breakpoints.clear();
    seg_spec.abs_tol = spec_.abs_tol / static_cast<double>(nseg);
    for (std::size_t s = nseg; s-- > 0;) {
      const double a = cuts[s];
      const double b = cuts[s + 1];
      tail_acc[s] = tail_acc[s + 1] +
                    hill::integrate([&](double r) { return 1.0 - d_.cdf_unchecked(r); },
                                    a, b, seg_spec);
      belief_acc[s] = belief_acc[s + 1] + belief_segment(g, a, b, seg_spec);
    }
    std::vector<double> out(u.size());
    if (jacobian) jacobian->assign(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::size_t s = static_cast<std::size_t>(
          std::lower_bound(cuts.begin(), cuts.end(), u[i]) - cuts.begin());
      const int t = static_cast<int>(i) + 1;
      out[i] = u[i] - mu_ - (t1_ - t) * tail_acc[s] - belief_acc[s];
      if (jacobian) {
        const double fu = d_.cdf_unchecked(u[i]);
        const double gu = g.eval(fu, g.branch(u[i]));
        (*jacobian)[i] =
            1.0 + (1.0 - fu) * ((t1_ - t) + std::pow(gu, n_ - 1) * weight(fu, case_index(u[i])));
      }
    }
    return out;
  }

  // Residual of coordinate t (1-based) alone, integrating only above u_t.
  double residual_at(const std::vector<double>& u, int t) const {
    const BeliefCdf g = BeliefCdf::allowing_ties(d_, u);
    const double lo = u[t - 1];
    const auto cuts = segment_cuts(u, lo);
    const std::size_t nseg = cuts.size() - 1;
    QuadratureSpec seg_spec = spec_;
    seg_spec.breakpoints.clear();
    seg_spec.abs_tol = spec_.abs_tol / static_cast<double>(nseg);
    double tl = 0.0, bl = 0.0;
    for (std::size_t s = 0; s < nseg; ++s) {
      tl += hill::integrate([&](double r) { return 1.0 - d_.cdf_unchecked(r); },
                            cuts[s], cuts[s + 1], seg_spec);
      bl += belief_segment(g, cuts[s], cuts[s + 1], seg_spec);
    }
    return lo - mu_ - (t1_ - t) * tl - bl;
  }

 private:
  // (T - T1 - k) F^k with k the branch index.
  double weight(double fr, int k) const {
    return (t_ - t1_ - k) * std::pow(fr, k);
  }

  // Sorted cut points in [lo, 1] at which the integrand changes form.
  std::vector<double> segment_cuts(const std::vector<double>& u, double lo) const {
    std::vector<double> cuts{lo, 1.0};
    for (double v : u) if (v > lo && v < 1.0) cuts.push_back(v);
    for (double v : post_) if (v > lo && v < 1.0) cuts.push_back(v);
    for (double v : d_.kinks()) if (v > lo && v < 1.0) cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
  }

  // ∫_a^b G^{N-1}(1-F) W over one segment; branch indices are fixed from the
  // midpoint since the weight jumps at the post-T1 thresholds.
  double belief_segment(const BeliefCdf& g, double a, double b,
                        const QuadratureSpec& spec) const {
    const double mid = 0.5 * (a + b);
    const int gb = g.branch(mid);
    const int k = case_index(mid);
    return hill::integrate(
        [&](double r) {
          const double fr = d_.cdf_unchecked(r);
          return std::pow(g.eval(fr, gb), n_ - 1) * (1.0 - fr) * weight(fr, k);
        },
        a, b, spec);
  }

  const RewardDistribution& d_;
  int n_;
  int t_;
  int t1_;
  double mu_;
  QuadratureSpec spec_;
  std::vector<double> post_;
  std::vector<double> benchmark_;
};

namespace detail {

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline bool admissible(const std::vector<double>& u, double mu) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] >= mu && u[i] <= 1.0)) return false;
    if (i > 0 && !(u[i] < u[i - 1])) return false;
  }
  return true;
}

// Solves coordinate t of the system by bisection with the others held fixed,
// keeping the prefix monotone.
inline double bisect_coordinate(const OneTimeSystem& sys, std::vector<double>& u, int t,
                                double tol) {
  const std::size_t i = static_cast<std::size_t>(t - 1);
  double lo = i + 1 < u.size() ? u[i + 1] : sys.mu();
  double hi = i > 0 ? u[i - 1] : 1.0;
  auto g = [&](double x) {
    u[i] = x;
    return sys.residual_at(u, t);
  };
  const double glo = g(lo);
  if (glo >= 0.0) return glo;  // root sits at or below the lower neighbour
  const double ghi = g(hi);
  if (ghi <= 0.0) return ghi;
  double gm = ghi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    gm = g(mid);
    if (std::abs(gm) < 0.01 * tol) break;
    if (gm < 0.0) lo = mid; else hi = mid;
  }
  return gm;
}

}  // namespace detail

enum class SolverMethod { kNewton, kBisection };

// Thresholds under the one-time mechanism that permits sharing only at T1.
// Post-T1 entries are the benchmark; the T1 pre-communication entries solve
// the coupled system by diagonal-Jacobian Newton with damping, re-detecting
// each coordinate's branch every iteration and moving coordinates that
// chatter between branches to bisection. kBisection skips Newton entirely
// and runs Gauss-Seidel sweeps of per-coordinate bisection.
inline ThresholdSequence solve_one_time(const RewardDistribution& d, int agents,
                                        int horizon, int comm_slot,
                                        const ThresholdSequence& benchmark,
                                        const SolverOptions& opt = {},
                                        SolverMethod method = SolverMethod::kNewton,
                                        std::optional<std::vector<double>> start = {}) {
  if (horizon < 2) throw DomainError("solve_one_time: T must be >= 2");
  const OneTimeSystem sys(d, agents, horizon, comm_slot, benchmark.values,
                          opt.quadrature);
  const double mu = d.mean();
  std::vector<double> u;
  if (start) {
    u = *start;
    if (static_cast<int>(u.size()) != comm_slot) {
      throw DomainError("solve_one_time: start must hold T1 values");
    }
  } else if (method == SolverMethod::kNewton) {
    u.assign(benchmark.values.begin(), benchmark.values.begin() + comm_slot);
  } else {
    // Cold start: evenly spaced, decreasing, inside (μ, 1).
    for (int t = 1; t <= comm_slot; ++t) {
      u.push_back(mu + (1.0 - mu) * (comm_slot - t + 1.0) / (comm_slot + 2.0));
    }
  }
  if (!detail::admissible(u, mu)) {
    throw DomainError("solve_one_time: start must be strictly decreasing within [mu, 1]");
  }

  ThresholdSequence seq;
  seq.horizon = horizon;
  seq.comm_slot = comm_slot;
  std::vector<int> last_case(u.size()), flips(u.size(), 0);
  std::vector<bool> use_bisection(u.size(), method == SolverMethod::kBisection);
  for (std::size_t i = 0; i < u.size(); ++i) last_case[i] = sys.case_index(u[i]);

  std::vector<double> jac;
  std::vector<double> res = sys.residuals(u, &jac);
  double norm = detail::max_abs(res);
  int iter = 0;
  int damped_steps = 0;
  // Past the tolerance, a few polish iterations aim at 1% of it so that the
  // residual keeps its margin when re-evaluated with tighter quadrature.
  const double target = 0.01 * opt.tolerance;
  int polish = 0;
  for (; iter < opt.max_iterations && !(norm < target); ++iter) {
    if (norm < opt.tolerance && ++polish > 20) break;
    bool any_newton = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (use_bisection[i]) {
        detail::bisect_coordinate(sys, u, static_cast<int>(i) + 1, opt.tolerance);
      } else {
        any_newton = true;
      }
    }
    if (any_newton) {
      if (std::any_of(use_bisection.begin(), use_bisection.end(), [](bool b) { return b; })) {
        res = sys.residuals(u, &jac);
        norm = detail::max_abs(res);
      }
      std::vector<double> step(u.size(), 0.0);
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (!use_bisection[i]) step[i] = -res[i] / jac[i];
      }
      double lambda = 1.0;
      bool accepted = false;
      for (int h = 0; h < 60; ++h, lambda *= 0.5) {
        std::vector<double> cand(u);
        for (std::size_t i = 0; i < u.size(); ++i) cand[i] += lambda * step[i];
        if (!detail::admissible(cand, mu)) continue;
        std::vector<double> cjac;
        auto cres = sys.residuals(cand, &cjac);
        const double cnorm = detail::max_abs(cres);
        if (cnorm < norm) {
          u = std::move(cand);
          res = std::move(cres);
          jac = std::move(cjac);
          norm = cnorm;
          accepted = true;
          if (h > 0) ++damped_steps;
          break;
        }
      }
      if (!accepted) {
        // Newton stalled: one Gauss-Seidel bisection sweep restores progress.
        for (std::size_t i = 0; i < u.size(); ++i) {
          detail::bisect_coordinate(sys, u, static_cast<int>(i) + 1, opt.tolerance);
        }
      }
    }
    res = sys.residuals(u, &jac);
    norm = detail::max_abs(res);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const int c = sys.case_index(u[i]);
      if (c != last_case[i]) {
        last_case[i] = c;
        if (++flips[i] > opt.max_case_flips && !use_bisection[i]) {
          use_bisection[i] = true;
          seq.diagnostics.push_back("coordinate " + std::to_string(i + 1) +
                                    " switched to bisection after branch chatter");
        }
      }
    }
  }
  if (!(norm < opt.tolerance) || !detail::admissible(u, mu)) {
    std::vector<int> bad;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!(std::abs(res[i]) < opt.tolerance) || flips[i] > opt.max_case_flips) {
        bad.push_back(static_cast<int>(i) + 1);
      }
    }
    std::ostringstream os;
    os << "one-time thresholds for T1=" << comm_slot << " (N=" << agents
       << ", T=" << horizon << ") did not converge after " << iter
       << " iterations; max residual " << format_double(norm);
    if (!bad.empty()) {
      os << "; unresolved coordinates:";
      for (int b : bad) os << ' ' << b << "(flips=" << flips[b - 1] << ')';
    }
    throw SolverError(os.str(), bad);
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (double p : std::vector<double>(benchmark.values.begin() + comm_slot,
                                        benchmark.values.end())) {
      if (u[i] == p) {
        seq.diagnostics.push_back("coordinate " + std::to_string(i + 1) +
                                  " sits exactly on a benchmark threshold; "
                                  "half-open branch assignment applied");
      }
    }
  }
  if (damped_steps > 0) {
    seq.diagnostics.push_back("damped Newton steps: " + std::to_string(damped_steps));
  }
  seq.iterations = iter;
  seq.values = u;
  seq.residuals = res;
  for (int t = comm_slot + 1; t <= horizon; ++t) {
    seq.values.push_back(benchmark.values[t - 1]);
    seq.residuals.push_back(benchmark.residuals[t - 1]);
  }
  return seq;
}

inline ThresholdSequence solve_one_time(const RewardDistribution& d, int agents,
                                        int horizon, int comm_slot,
                                        const SolverOptions& opt = {}) {
  return solve_one_time(d, agents, horizon, comm_slot, solve_single_agent(d, horizon, opt),
                        opt);
}

// Centralized sharing is the one-time mechanism with T1 = T - 1.
inline ThresholdSequence solve_centralized_nonmyopic(const RewardDistribution& d,
                                                     int agents, int horizon,
                                                     const SolverOptions& opt = {}) {
  if (horizon < 2) throw DomainError("solve_centralized_nonmyopic: T must be >= 2");
  return solve_one_time(d, agents, horizon, horizon - 1, opt);
}

// Residuals of a solved one-time sequence recomputed from scratch with the
// given quadrature; entries after T1 use the single-agent equation.
inline std::vector<double> one_time_residuals(const RewardDistribution& d, int agents,
                                              const ThresholdSequence& seq,
                                              const QuadratureSpec& spec) {
  const int t1 = seq.comm_slot;
  std::vector<double> pre(seq.values.begin(), seq.values.begin() + t1);
  const OneTimeSystem sys(d, agents, seq.horizon, t1, seq.values, spec);
  std::vector<double> out = sys.residuals(pre);
  for (int t = t1 + 1; t <= seq.horizon; ++t) {
    const double u = seq.at(t);
    out.push_back(u - d.mean() - (seq.horizon - t) * tail(d, u, spec));
  }
  return out;
}

// Expected exploration slots per agent under centralized sharing:
// 1 + F(u_T)^{TN} + Σ_{t<T} F(u_t)^t.
inline double exploration_count_centralized(const RewardDistribution& d, int agents,
                                            const ThresholdSequence& seq) {
  const int horizon = seq.horizon;
  double out = 1.0 + std::pow(d.cdf(seq.at(horizon)), static_cast<double>(horizon) * agents);
  for (int t = 1; t < horizon; ++t) out += std::pow(d.cdf(seq.at(t)), t);
  return out;
}

// Expected exploration slots per agent under the one-time mechanism.
inline double exploration_count_one_time(const RewardDistribution& d, int agents,
                                         const ThresholdSequence& seq) {
  const int t1 = seq.comm_slot;
  const int horizon = seq.horizon;
  if (t1 < 1 || t1 > horizon - 1) throw DomainError("sequence has no usable T1");
  const BeliefCdf g(d, std::vector<double>(seq.values.begin(), seq.values.begin() + t1));
  double out = 1.0;
  for (int t = 1; t <= t1; ++t) out += std::pow(d.cdf(seq.at(t)), t);
  for (int t = t1 + 1; t <= horizon; ++t) {
    const double u = seq.at(t);
    out += std::pow(g(u), agents) * std::pow(d.cdf(u), t - t1 - 1);
  }
  return out;
}

struct OneTimeWelfare {
  double welfare = 0.0;            // total over N agents and slots 0..T
  double exploration_slots = 0.0;  // per agent
};

// Total welfare of the one-time mechanism at seq.comm_slot.
inline OneTimeWelfare welfare_one_time(const RewardDistribution& d, int agents,
                                       const ThresholdSequence& seq,
                                       const QuadratureSpec& spec = QuadratureSpec(1e-11, 40)) {
  const int t1 = seq.comm_slot;
  const int horizon = seq.horizon;
  if (t1 < 1 || t1 > horizon - 1) throw DomainError("sequence has no usable T1");
  if (static_cast<int>(seq.values.size()) != horizon) {
    throw DomainError("sequence length differs from T");
  }
  const double n = agents;
  const double mu = d.mean();
  const BeliefCdf g(d, std::vector<double>(seq.values.begin(), seq.values.begin() + t1));
  const QuadratureSpec q = spec.with_breakpoints(seq.values);
  auto f = [&](double r) { return d.cdf_unchecked(r); };
  // ∫_a^b r dF(r)^k via integration by parts.
  auto stieltjes = [&](double a, double b, int k) {
    const double fk = integrate(d, [&](double r) { return std::pow(f(r), k); }, a, b, q);
    return b * std::pow(f(b), k) - a * std::pow(f(a), k) - fk;
  };
  auto u = [&](int t) { return seq.at(t); };

  double v = n * mu + n * t1 * stieltjes(u(1), 1.0, 1);
  for (int t = 1; t <= t1; ++t) v += n * mu * std::pow(f(u(t)), t);
  for (int t = 1; t <= t1 - 1; ++t) {
    v += n * (t1 - t) *
         (std::pow(f(u(t)), t) * stieltjes(u(t), 1.0, 1) + stieltjes(u(t + 1), u(t), t + 1));
  }
  auto gn = [&](double r) { return std::pow(g(r), n); };
  v += n * (horizon - t1) * (1.0 - integrate(d, gn, u(t1 + 1), 1.0, q));
  for (int t = t1 + 2; t <= horizon; ++t) {
    v -= n * (horizon - t + 1) *
         integrate(d, [&](double r) { return gn(r) * std::pow(f(r), t - t1 - 1); },
                   u(t), u(t - 1), q);
  }
  return {v, exploration_count_one_time(d, agents, seq)};
}

struct CandidateOutcome {
  int comm_slot = 0;
  bool solved = false;
  double welfare = 0.0;
  double exploration_slots = 0.0;
  std::string error;
};

struct CommTimeResult {
  int best_comm_slot = 0;
  ThresholdSequence thresholds;
  double welfare = 0.0;
  double exploration_slots = 0.0;
  std::vector<CandidateOutcome> scan;  // one entry per T1 = 1..T-1
};

// Scans every T1 in 1..T-1 and keeps the strict maximizer, so ties go to the
// earliest slot. Candidates whose solve fails are recorded and skipped.
inline CommTimeResult optimize_comm_time(const RewardDistribution& d, int agents,
                                         int horizon, const SolverOptions& opt = {}) {
  if (horizon < 2) throw DomainError("optimize_comm_time: T must be >= 2");
  if (agents < 2) throw DomainError("optimize_comm_time: N must be >= 2");
  const ThresholdSequence bench = solve_single_agent(d, horizon, opt);
  CommTimeResult out;
  double best = -std::numeric_limits<double>::infinity();
  for (int t1 = 1; t1 <= horizon - 1; ++t1) {
    CandidateOutcome c;
    c.comm_slot = t1;
    try {
      auto seq = solve_one_time(d, agents, horizon, t1, bench, opt);
      const auto w = welfare_one_time(d, agents, seq, opt.quadrature);
      c.solved = true;
      c.welfare = w.welfare;
      c.exploration_slots = w.exploration_slots;
      if (w.welfare > best) {
        best = w.welfare;
        out.best_comm_slot = t1;
        out.thresholds = std::move(seq);
        out.welfare = w.welfare;
        out.exploration_slots = w.exploration_slots;
      }
    } catch (const Error& e) {
      c.error = e.what();
    }
    out.scan.push_back(std::move(c));
  }
  if (out.best_comm_slot == 0) {
    std::ostringstream os;
    os << "every candidate T1 failed:";
    for (const auto& c : out.scan) os << "\n  T1=" << c.comm_slot << ": " << c.error;
    throw SolverError(os.str(), {});
  }
  return out;
}

// CSV with header `t,u_t,residual`.
inline void write_thresholds_csv(const ThresholdSequence& seq, std::ostream& out) {
  out << "t,u_t,residual\n";
  for (int t = 1; t <= seq.horizon; ++t) {
    const double r = static_cast<std::size_t>(t - 1) < seq.residuals.size()
                         ? seq.residuals[t - 1]
                         : 0.0;
    out << t << ',' << format_double(seq.at(t)) << ',' << format_double(r) << '\n';
  }
}

}  // namespace hill::nonmyopic

#endif  // HILL_NONMYOPIC_HPP_
