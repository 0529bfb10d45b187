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

#ifndef HILL_MYOPIC_HPP_
#define HILL_MYOPIC_HPP_

// Welfare calculus and mechanism optimization for myopic agents, who explore
// a fresh option exactly when their best known reward is below the prior
// mean and share truthfully whenever sharing is allowed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "hill/distribution.hpp"
#include "hill/error.hpp"
#include "hill/quadrature.hpp"
#include "hill/schedule.hpp"

namespace hill::myopic {

struct XYTerm {
  double x = 0.0;  // exploitation loss of one more blocked slot
  double y = 0.0;  // per-slot benefit after a window of this length reopens
};

// x_i, y_i for a single i. Both integrands vanish identically when N = 1.
inline XYTerm xy_terms(const RewardDistribution& d, int agents, int i,
                       const QuadratureSpec& spec = {}) {
  if (agents < 1) throw DomainError("xy_terms: N must be >= 1");
  if (i < 1) throw DomainError("xy_terms: i must be >= 1");
  if (agents == 1) return {};
  const double mu = d.mean();
  const double a = d.cdf(mu);
  const double n = agents;
  const double a_n = std::pow(a, n);
  const double a_i = std::pow(a, i);
  const double a_in = std::pow(a, i * n);
  // Decentralized agent's value CDF on [mu, 1] after i private slots, and the
  // pooled (centralized) counterpart.
  auto own = [&](double fr) {
    const double l = (fr - a) / (1.0 - a);
    return l + a_i * (1.0 - l);
  };
  auto pooled = [&](double fr) {
    const double h = (std::pow(fr, n) - a_n) / (1.0 - a_n);
    return h + a_in * (1.0 - h);
  };
  XYTerm out;
  out.x = integrate(
      d, [&](double r) { const double fr = d.cdf_unchecked(r); return own(fr) - pooled(fr); },
      mu, 1.0, spec);
  out.y = integrate(
      d,
      [&](double r) {
        const double fr = d.cdf_unchecked(r);
        return pooled(fr) - std::pow(own(fr), n);
      },
      mu, 1.0, spec);
  return out;
}

// x_i, y_i for i = 1..max_index with prefix sums of x, computed once so that
// scans over window lengths cost O(1) per candidate.
class XYTable {
 public:
  XYTable(const RewardDistribution& d, int agents, int max_index,
          const QuadratureSpec& spec = {})
      : agents_(agents), terms_(static_cast<std::size_t>(max_index) + 1),
        prefix_x_(static_cast<std::size_t>(max_index) + 1, 0.0) {
    if (max_index < 1) throw DomainError("XYTable: max_index must be >= 1");
    for (int i = 1; i <= max_index; ++i) {
      terms_[i] = xy_terms(d, agents, i, spec);
      prefix_x_[i] = prefix_x_[i - 1] + terms_[i].x;
    }
  }

  int agents() const { return agents_; }
  int max_index() const { return static_cast<int>(terms_.size()) - 1; }
  double x(int i) const { return terms_.at(i).x; }
  double y(int i) const { return terms_.at(i).y; }
  // Sum of x_1..x_delta.
  double sum_x(int delta) const { return prefix_x_.at(delta); }

  double max_positive_y() const {
    double best = 0.0;
    for (std::size_t i = 1; i < terms_.size(); ++i) best = std::max(best, terms_[i].y);
    return best;
  }

 private:
  int agents_;
  std::vector<XYTerm> terms_;
  std::vector<double> prefix_x_;
};

struct MyopicWelfareReport {
  double total_welfare = 0.0;               // all N agents, slots 0..T
  double expected_exploration_slots = 0.0;  // per agent
  std::vector<double> per_window_terms;
};

namespace detail {

inline void check_basic(int agents, int horizon) {
  if (agents < 1) throw DomainError("N must be >= 1");
  if (horizon < 1) throw DomainError("T must be >= 1");
}

// Geometric sum of ratio^t over t = from..to.
inline double geometric_sum(double ratio, int from, int to) {
  if (to < from) return 0.0;
  if (ratio == 1.0) return to - from + 1;
  return (std::pow(ratio, from) - std::pow(ratio, to + 1)) / (1.0 - ratio);
}

}  // namespace detail

// Centralized sharing: every agent pools at every slot.
inline MyopicWelfareReport welfare_centralized(const RewardDistribution& d,
                                               int agents, int horizon,
                                               const QuadratureSpec& spec = {}) {
  detail::check_basic(agents, horizon);
  const double mu = d.mean();
  const double a = d.cdf(mu);
  const double n = agents;
  const double a_n = std::pow(a, n);
  // H is the law of the best of N draws given that it beats mu.
  const double int_h = integrate(
      d,
      [&](double r) { return (std::pow(d.cdf_unchecked(r), n) - a_n) / (1.0 - a_n); },
      mu, 1.0, spec);
  const double mean_h = 1.0 - int_h;
  const double tail = integrate(
      d, [&](double r) { return (1.0 - std::pow(d.cdf_unchecked(r), n)) / (1.0 - a_n); },
      mu, 1.0, spec);
  const double explore = (1.0 - std::pow(a, n * (horizon + 1))) / (1.0 - a_n);
  MyopicWelfareReport out;
  out.total_welfare = n * (horizon + 1) * mean_h - n * explore * tail;
  out.expected_exploration_slots = explore;
  return out;
}

// Window lengths actually in force: blocking the final slot has no effect,
// so windows are clipped to end at T - 1.
inline std::vector<Window> effective_windows(const CommSchedule& schedule) {
  std::vector<Window> out;
  for (const auto& w : schedule.windows()) {
    const int len = std::min(w.length, schedule.horizon() - w.start);
    if (len >= 1) out.push_back({w.start, len});
  }
  return out;
}

inline MyopicWelfareReport welfare_schedule(const RewardDistribution& d,
                                            int agents,
                                            const CommSchedule& schedule,
                                            const XYTable& table,
                                            const QuadratureSpec& spec = {}) {
  const int horizon = schedule.horizon();
  MyopicWelfareReport out = welfare_centralized(d, agents, horizon, spec);
  const auto windows = effective_windows(schedule);
  if (windows.empty()) return out;
  const double n = agents;
  const double a = d.cdf(d.mean());
  const double a_n = std::pow(a, n);
  for (const auto& w : windows) {
    if (w.length + 1 > table.max_index()) {
      throw DomainError("XYTable too short for schedule");
    }
    const double term =
        n * std::pow(a, n * w.start) *
        ((horizon - w.start - w.length) * table.y(w.length + 1) -
         table.sum_x(w.length));
    out.per_window_terms.push_back(term);
    out.total_welfare += term;
  }
  // Expected exploration slots per agent.
  double explore = detail::geometric_sum(a_n, 0, windows.front().start);
  for (std::size_t m = 0; m < windows.size(); ++m) {
    const auto& w = windows[m];
    const int next = m + 1 < windows.size() ? windows[m + 1].start : horizon;
    explore += detail::geometric_sum(a_n, w.start + w.length + 1, next);
    explore += std::pow(a_n, w.start) * detail::geometric_sum(a, 1, w.length);
  }
  out.expected_exploration_slots = explore;
  return out;
}

inline MyopicWelfareReport welfare_schedule(const RewardDistribution& d,
                                            int agents,
                                            const CommSchedule& schedule,
                                            const QuadratureSpec& spec = {}) {
  int longest = 1;
  for (const auto& w : effective_windows(schedule)) longest = std::max(longest, w.length);
  return welfare_schedule(d, agents, schedule,
                          XYTable(d, agents, longest + 1, spec), spec);
}

struct DeviationResult {
  bool holds = false;
  int minimizing_delta = 0;  // 0 when no finite candidate exists
  double threshold = std::numeric_limits<double>::infinity();
};

// Decentralization beats centralized sharing iff
// T > min over delta of (x_1 + ... + x_delta) / y_{delta+1} + delta.
// Candidates with y_{delta+1} <= 0 (including 0/0) count as +infinity.
inline DeviationResult deviation_condition(const XYTable& table, int horizon) {
  if (horizon < 2) throw DomainError("deviation_condition: T must be >= 2");
  if (table.max_index() < horizon) throw DomainError("XYTable too short");
  DeviationResult out;
  for (int delta = 1; delta <= horizon - 1; ++delta) {
    const double y = table.y(delta + 1);
    if (!(y > 0.0)) continue;
    const double value = table.sum_x(delta) / y + delta;
    if (value < out.threshold) {
      out.threshold = value;
      out.minimizing_delta = delta;
    }
  }
  out.holds = horizon > out.threshold;
  return out;
}

inline DeviationResult deviation_condition(const RewardDistribution& d,
                                           int agents, int horizon,
                                           const QuadratureSpec& spec = {}) {
  detail::check_basic(agents, horizon);
  if (horizon < 2) throw DomainError("deviation_condition: T must be >= 2");
  return deviation_condition(XYTable(d, agents, horizon, spec), horizon);
}

inline double approximation_ratio(double f_mu, int agents, int horizon) {
  if (agents < 1) throw DomainError("approximation_ratio: N must be >= 1");
  if (horizon < 2) throw DomainError("approximation_ratio: T must be >= 2");
  const double n = agents;
  const double a_tn = std::pow(f_mu, horizon * n);
  if (a_tn >= 1.0) return 1.0;
  return 1.0 - (std::pow(f_mu, 2.0 * n) - a_tn) / (1.0 - a_tn);
}

inline double approximation_ratio(const RewardDistribution& d, int agents,
                                  int horizon) {
  return approximation_ratio(d.cdf(d.mean()), agents, horizon);
}

struct MechanismResult {
  CommSchedule schedule;
  double welfare = 0.0;              // total welfare of `schedule`
  double centralized_welfare = 0.0;  // V for M = empty
  // Gain over centralized sharing for each candidate leading-window length
  // delta = 1..T-1 (index delta - 1); empty if the deviation test failed.
  std::vector<double> scan;
};

// Single leading window chosen by a linear scan. The scan keeps the first
// strict maximizer, so ties resolve to the shortest window.
inline MechanismResult optimize_single_window(const RewardDistribution& d,
                                              int agents, int horizon,
                                              const QuadratureSpec& spec = {}) {
  detail::check_basic(agents, horizon);
  if (horizon < 2) throw DomainError("optimize_single_window: T must be >= 2");
  const XYTable table(d, agents, horizon, spec);
  const double v0 = welfare_centralized(d, agents, horizon, spec).total_welfare;
  MechanismResult out{CommSchedule::centralized(horizon), v0, v0, {}};
  if (!deviation_condition(table, horizon).holds) return out;
  int best_delta = 0;
  double best = -std::numeric_limits<double>::infinity();
  out.scan.reserve(horizon - 1);
  for (int delta = 1; delta <= horizon - 1; ++delta) {
    const double gain = agents * ((horizon - delta) * table.y(delta + 1) -
                                  table.sum_x(delta));
    out.scan.push_back(gain);
    if (gain > best) {
      best = gain;
      best_delta = delta;
    }
  }
  out.schedule = CommSchedule::leading_window(horizon, best_delta);
  out.welfare = v0 + best;
  return out;
}

struct ExactOptions {
  int max_horizon = 14;
  bool prune = true;
};

struct ExactResult {
  CommSchedule schedule;
  double welfare = 0.0;
  double centralized_welfare = 0.0;
  long long nodes_visited = 0;
};

// Gain of a leading-window chain {delta_1, ..., delta_M} laid out back to back
// with one communication slot between windows.
inline double chain_gain(const XYTable& table, double f_mu, int horizon,
                         const std::vector<int>& deltas) {
  const double n = table.agents();
  double gain = 0.0;
  int start = 0;
  for (int delta : deltas) {
    gain += n * std::pow(f_mu, n * start) *
            ((horizon - start - delta) * table.y(delta + 1) - table.sum_x(delta));
    start += delta + 1;
  }
  return gain;
}

// Exhaustive branch-and-bound over window chains starting at slot 0 with a
// single communication slot between windows. Exponential in T.
inline ExactResult optimize_exact(const RewardDistribution& d, int agents,
                                  int horizon, const ExactOptions& options = {},
                                  const QuadratureSpec& spec = {}) {
  detail::check_basic(agents, horizon);
  if (horizon < 2) throw DomainError("optimize_exact: T must be >= 2");
  if (horizon > options.max_horizon) {
    std::ostringstream os;
    os << "optimize_exact refuses T=" << horizon << " (limit "
       << options.max_horizon
       << "); the search is exponential, use optimize_single_window";
    throw DomainError(os.str());
  }
  const XYTable table(d, agents, horizon, spec);
  const double v0 = welfare_centralized(d, agents, horizon, spec).total_welfare;
  const double a = d.cdf(d.mean());
  const double n = agents;
  const double a_n = std::pow(a, n);
  const double y_max = table.max_positive_y();
  // Later windows start at least two slots apart, so their discounts form a
  // geometric series in F(mu)^(2N).
  const double chain_factor = a_n * a_n < 1.0 ? 1.0 / (1.0 - a_n * a_n) : horizon;

  double best_gain = 0.0;
  std::vector<int> best_chain;
  std::vector<int> chain;
  long long nodes = 0;

  std::function<void(int, double)> search = [&](int start, double gain) {
    ++nodes;
    if (gain > best_gain) {
      best_gain = gain;
      best_chain = chain;
    }
    if (start + 1 > horizon - 1) return;
    if (options.prune) {
      const double bound =
          n * y_max * (horizon - start) * std::pow(a_n, start) * chain_factor;
      if (gain + bound <= best_gain) return;
    }
    const double discount = n * std::pow(a_n, start);
    for (int delta = 1; start + delta <= horizon - 1; ++delta) {
      const double term = discount * ((horizon - start - delta) * table.y(delta + 1) -
                                       table.sum_x(delta));
      chain.push_back(delta);
      search(start + delta + 1, gain + term);
      chain.pop_back();
    }
  };
  search(0, 0.0);

  std::vector<Window> windows;
  int start = 0;
  for (int delta : best_chain) {
    windows.push_back({start, delta});
    start += delta + 1;
  }
  ExactResult out{CommSchedule(horizon, std::move(windows)), v0 + best_gain, v0,
                  nodes};
  return out;
}

}  // namespace hill::myopic

#endif  // HILL_MYOPIC_HPP_
