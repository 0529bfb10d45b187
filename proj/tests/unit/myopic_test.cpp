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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hill/myopic.hpp"
#include "hill/sim.hpp"

namespace {

using hill::CommSchedule;
using hill::RewardDistribution;
namespace my = hill::myopic;

// Midpoint rule with many cells on [lo, hi].
template <typename F>
double riemann(F f, double lo, double hi, int cells = 1000000) {
  const double h = (hi - lo) / cells;
  double s = 0.0;
  for (int k = 0; k < cells; ++k) s += f(lo + (k + 0.5) * h);
  return s * h;
}

// x_i and y_i written out directly from their defining integrals.
std::pair<double, double> xy_oracle(const RewardDistribution& d, int n, int i) {
  const double mu = d.mean();
  const double a = d.cdf(mu);
  auto own = [&](double f) { return (f - a) / (1 - a) + std::pow(a, i) * (1 - f) / (1 - a); };
  auto pooled = [&](double f) {
    const double an = std::pow(a, n);
    return (std::pow(f, n) - an) / (1 - an) + std::pow(a, i * n) * (1 - std::pow(f, n)) / (1 - an);
  };
  const double x = riemann([&](double r) { const double f = d.cdf(r); return own(f) - pooled(f); },
                           mu, 1.0);
  const double y = riemann(
      [&](double r) { const double f = d.cdf(r); return pooled(f) - std::pow(own(f), n); }, mu, 1.0);
  return {x, y};
}

// Best chain gain over windows laid out from slot 0 by dynamic programming
// on the next window start.
double chain_dp(const my::XYTable& t, double a, int horizon) {
  const double n = t.agents();
  std::vector<double> best(static_cast<std::size_t>(horizon) + 2, 0.0);
  for (int s = horizon; s >= 0; --s) {
    double b = 0.0;
    for (int delta = 1; s + delta <= horizon - 1; ++delta) {
      const double term = n * std::pow(a, n * s) *
                          ((horizon - s - delta) * t.y(delta + 1) - t.sum_x(delta));
      b = std::max(b, term + best[std::min(horizon + 1, s + delta + 1)]);
    }
    best[s] = b;
  }
  return best[0];
}

TEST(XyTerms, VanishForOneAgent) {
  for (int i : {1, 2, 7}) {
    const auto t = my::xy_terms(RewardDistribution::beta(2, 3), 1, i);
    EXPECT_EQ(t.x, 0.0);
    EXPECT_EQ(t.y, 0.0);
  }
}

TEST(XyTerms, MatchRiemannOracleUniform) {
  const auto d = RewardDistribution::uniform();
  for (int i : {1, 2}) {
    const auto t = my::xy_terms(d, 3, i);
    const auto [x, y] = xy_oracle(d, 3, i);
    EXPECT_NEAR(t.x, x, 1e-7) << "i=" << i;
    EXPECT_NEAR(t.y, y, 1e-7) << "i=" << i;
  }
}

TEST(XyTerms, MatchRiemannOracleSkewedBeta) {
  const auto d = RewardDistribution::beta_with_mean(0.2);
  for (int i : {1, 4}) {
    const auto t = my::xy_terms(d, 4, i);
    const auto [x, y] = xy_oracle(d, 4, i);
    EXPECT_NEAR(t.x, x, 1e-7);
    EXPECT_NEAR(t.y, y, 1e-7);
  }
}

TEST(XyTerms, BenefitGrowsWithWindow) {
  const my::XYTable t(RewardDistribution::uniform(), 3, 3);
  EXPECT_LT(t.y(1), t.y(2));
  EXPECT_LT(t.y(2), t.y(3));
}

TEST(XyTerms, NonNegative) {
  for (const auto& d : {RewardDistribution::uniform(), RewardDistribution::beta_with_mean(0.024),
                        RewardDistribution::beta_with_mean(0.6), RewardDistribution::beta(0.5, 0.5)}) {
    for (int n : {2, 5, 30}) {
      const my::XYTable t(d, n, 50);
      for (int i = 1; i <= 50; ++i) {
        EXPECT_GE(t.x(i), -1e-9);
        EXPECT_GE(t.y(i), -1e-9);
      }
    }
  }
}

TEST(Centralized, ExplorationCountArithmetic) {
  const auto r = my::welfare_centralized(RewardDistribution::uniform(), 1, 1);
  EXPECT_NEAR(r.expected_exploration_slots, 1.5, 1e-15);
}

TEST(Centralized, WelfareMatchesDirectIntegrals) {
  const auto d = RewardDistribution::uniform();
  const int n = 5, horizon = 20;
  const double a = 0.5, an = std::pow(a, n);
  // Mean of the best of N draws given that it beats mu, from its density.
  const double mean_best =
      riemann([&](double r) { return r * n * std::pow(r, n - 1) / (1 - an); }, 0.5, 1.0);
  const double tail = riemann([&](double r) { return (1 - std::pow(r, n)) / (1 - an); }, 0.5, 1.0);
  const double explore = (1 - std::pow(a, n * (horizon + 1))) / (1 - an);
  const double v = n * (horizon + 1) * mean_best - n * explore * tail;
  EXPECT_NEAR(my::welfare_centralized(d, n, horizon).total_welfare, v, 1e-8);
}

TEST(Centralized, BoundedByPerfectRewards) {
  const auto r = my::welfare_centralized(RewardDistribution::beta(2, 2), 7, 9);
  EXPECT_LE(r.total_welfare, 7 * 10.0);
  EXPECT_GE(r.expected_exploration_slots, 1.0);
  EXPECT_LE(r.expected_exploration_slots, 10.0);
}

TEST(Schedule, EmptyEqualsCentralized) {
  const auto d = RewardDistribution::beta(1.5, 4);
  const auto a = my::welfare_centralized(d, 4, 12);
  const auto b = my::welfare_schedule(d, 4, CommSchedule::centralized(12));
  EXPECT_EQ(a.total_welfare, b.total_welfare);
  EXPECT_EQ(a.expected_exploration_slots, b.expected_exploration_slots);
}

TEST(Schedule, SingleWindowMatchesOracleExpression) {
  const auto d = RewardDistribution::uniform();
  const int n = 3, horizon = 15, start = 2, len = 2;
  const double v0 = my::welfare_centralized(d, n, horizon).total_welfare;
  double sx = 0.0;
  for (int i = 1; i <= len; ++i) sx += xy_oracle(d, n, i).first;
  const double y = xy_oracle(d, n, len + 1).second;
  const double expect = n * std::pow(0.5, n * start) * ((horizon - start - len) * y - sx) + v0;
  const auto got = my::welfare_schedule(d, n, CommSchedule(horizon, {{start, len}}));
  EXPECT_NEAR(got.total_welfare, expect, 1e-6);
}

TEST(Schedule, RejectsBadLayouts) {
  EXPECT_THROW(CommSchedule(10, {{0, 3}, {3, 2}}), hill::ScheduleError);
  EXPECT_THROW(CommSchedule(10, {{4, 2}, {0, 1}}), hill::ScheduleError);
  EXPECT_THROW(CommSchedule(10, {{8, 4}}), hill::ScheduleError);
  EXPECT_THROW(CommSchedule(10, {{2, 0}}), hill::ScheduleError);
  EXPECT_NO_THROW(CommSchedule(10, {{0, 3}, {4, 2}}));
}

TEST(Schedule, JsonRoundTrip) {
  const CommSchedule s(20, {{0, 3}, {5, 2}});
  EXPECT_EQ(CommSchedule::from_json(nlohmann::json::parse(s.to_string())), s);
  EXPECT_EQ(s.to_string(), R"({"T":20,"windows":[{"len":3,"start":0},{"len":2,"start":5}]})");
  EXPECT_THROW(CommSchedule::from_json(nlohmann::json::parse(R"({"T":3})")), hill::ScheduleError);
}

// Analytic welfare and exploration counts against the simulator.
class ScheduleVsSim : public ::testing::TestWithParam<CommSchedule> {};

TEST_P(ScheduleVsSim, WithinThreeStandardErrors) {
  const auto d = RewardDistribution::beta_with_mean(0.3);
  const int n = 3;
  const CommSchedule& s = GetParam();
  const auto r = my::welfare_schedule(d, n, s);
  hill::sim::SimConfig c;
  c.agents = n;
  c.horizon = s.horizon();
  c.schedule = s;
  c.replications = 40000;
  c.master_seed = 17;
  const auto m = hill::sim::run(c, d);
  EXPECT_LT(std::abs(m.total_welfare_mean - r.total_welfare), 3 * m.total_welfare_stderr)
      << s.to_string();
  EXPECT_LT(std::abs(m.exploration_slots_mean - r.expected_exploration_slots),
            3 * m.exploration_slots_stderr + 1e-12)
      << s.to_string();
}

INSTANTIATE_TEST_SUITE_P(
    Layouts, ScheduleVsSim,
    ::testing::Values(CommSchedule::centralized(10), CommSchedule::leading_window(10, 4),
                      CommSchedule(10, {{0, 2}, {3, 3}, {7, 1}}), CommSchedule(10, {{1, 2}}),
                      CommSchedule(10, {{6, 5}}), CommSchedule(10, {{0, 10}})));

TEST(Deviation, FalseForOneAgent) {
  for (int horizon : {2, 10, 40}) {
    const auto r = my::deviation_condition(RewardDistribution::uniform(), 1, horizon);
    EXPECT_FALSE(r.holds);
    EXPECT_TRUE(std::isinf(r.threshold));
  }
}

TEST(Deviation, AgreesWithExhaustiveSearch) {
  const auto d = RewardDistribution::uniform();
  for (int horizon = 2; horizon <= 12; ++horizon) {
    const auto dev = my::deviation_condition(d, 5, horizon);
    const auto ex = my::optimize_exact(d, 5, horizon);
    EXPECT_EQ(dev.holds, !ex.schedule.is_centralized()) << "T=" << horizon;
  }
}

TEST(SingleWindow, CentralizedWhenConditionFails) {
  const auto r = my::optimize_single_window(RewardDistribution::uniform(), 1, 20);
  EXPECT_TRUE(r.schedule.is_centralized());
  EXPECT_EQ(r.welfare, r.centralized_welfare);
}

TEST(SingleWindow, ArgmaxMatchesOracleScan) {
  const auto d = RewardDistribution::uniform();
  const int n = 5, horizon = 10;
  std::vector<std::pair<double, double>> xy;
  for (int i = 1; i <= horizon; ++i) xy.push_back(xy_oracle(d, n, i));
  int best = 0;
  double best_v = -1e300, sx = 0.0;
  for (int delta = 1; delta <= horizon - 1; ++delta) {
    sx += xy[delta - 1].first;
    const double v = n * ((horizon - delta) * xy[delta].second - sx);
    if (v > best_v) {
      best_v = v;
      best = delta;
    }
  }
  const auto r = my::optimize_single_window(d, n, horizon);
  ASSERT_EQ(r.schedule.windows().size(), 1u);
  EXPECT_EQ(r.schedule.windows()[0].start, 0);
  EXPECT_EQ(r.schedule.windows()[0].length, best);
  EXPECT_NEAR(r.welfare - r.centralized_welfare, best_v, 1e-6);
}

TEST(SingleWindow, WelfareIsScanMaximumAndBeatsCentralized) {
  for (double mu : {0.05, 0.3, 0.5}) {
    const auto d = RewardDistribution::beta_with_mean(mu);
    const auto r = my::optimize_single_window(d, 6, 25);
    if (r.scan.empty()) continue;
    const double top = *std::max_element(r.scan.begin(), r.scan.end());
    EXPECT_DOUBLE_EQ(r.welfare - r.centralized_welfare, top);
    EXPECT_GE(r.welfare, r.centralized_welfare);
    EXPECT_NEAR(my::welfare_schedule(d, 6, r.schedule).total_welfare, r.welfare, 1e-9);
  }
}

TEST(Exact, MatchesDynamicProgrammingOracle) {
  for (double mu : {0.024, 0.2, 0.5}) {
    const auto d = RewardDistribution::beta_with_mean(mu);
    for (int n : {2, 5}) {
      for (int horizon : {4, 9, 14}) {
        const my::XYTable t(d, n, horizon);
        const auto ex = my::optimize_exact(d, n, horizon);
        EXPECT_NEAR(ex.welfare - ex.centralized_welfare, chain_dp(t, d.cdf(d.mean()), horizon),
                    1e-9)
            << mu << " " << n << " " << horizon;
      }
    }
  }
}

TEST(Exact, PruningDoesNotChangeOptimum) {
  const auto d = RewardDistribution::beta_with_mean(0.024);
  my::ExactOptions full;
  full.prune = false;
  for (int horizon : {8, 12, 14}) {
    const auto a = my::optimize_exact(d, 3, horizon);
    const auto b = my::optimize_exact(d, 3, horizon, full);
    EXPECT_EQ(a.schedule, b.schedule);
    EXPECT_LE(a.nodes_visited, b.nodes_visited);
  }
}

TEST(Exact, ChainStructure) {
  const auto ex = my::optimize_exact(RewardDistribution::beta_with_mean(0.024), 5, 14);
  int expected_start = 0;
  for (const auto& w : ex.schedule.windows()) {
    EXPECT_EQ(w.start, expected_start);
    expected_start = w.start + w.length + 1;
  }
  EXPECT_NEAR(my::welfare_schedule(RewardDistribution::beta_with_mean(0.024), 5, ex.schedule)
                  .total_welfare,
              ex.welfare, 1e-9);
}

TEST(Exact, RefusesLongHorizons) {
  EXPECT_THROW(my::optimize_exact(RewardDistribution::uniform(), 3, 15), hill::DomainError);
}

TEST(Exact, SingleWindowWithinApproximationRatio) {
  const auto d = RewardDistribution::uniform();
  for (int n : {2, 5}) {
    for (int horizon = 4; horizon <= 12; ++horizon) {
      const auto ex = my::optimize_exact(d, n, horizon);
      const auto ap = my::optimize_single_window(d, n, horizon);
      EXPECT_GE(ap.welfare, my::approximation_ratio(d, n, horizon) * ex.welfare - 1e-12);
      EXPECT_LE(ap.welfare, ex.welfare + 1e-9);
    }
  }
}

TEST(ApproximationRatio, Arithmetic) {
  EXPECT_DOUBLE_EQ(my::approximation_ratio(RewardDistribution::uniform(), 2, 4),
                   1 - (0.0625 - 0.00390625) / 0.99609375);
  EXPECT_EQ(my::approximation_ratio(0.0, 3, 10), 1.0);
  EXPECT_LT(1.0 - my::approximation_ratio(RewardDistribution::uniform(), 500, 10), 1e-100);
}

}  // namespace
