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

#include <cmath>
#include <sstream>
#include <vector>

#include "hill/io.hpp"
#include "hill/nonmyopic.hpp"
#include "hill/sim.hpp"

namespace {

using hill::CommSchedule;
using hill::RewardDistribution;
namespace sim = hill::sim;

sim::SimConfig base_config(int n, int horizon) {
  sim::SimConfig c;
  c.agents = n;
  c.horizon = horizon;
  c.schedule = CommSchedule::centralized(horizon);
  c.replications = 2000;
  c.master_seed = 42;
  return c;
}

TEST(Step, SingleAgentBestIsNondecreasing) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(1, 30);
  const auto rs = sim::ReplicationStreams(d, 9);
  std::vector<sim::AgentState> st(1);
  double prev = 0.0;
  for (int t = 0; t <= 30; ++t) {
    st = sim::step(st, t, c, d, rs).states;
    EXPECT_GE(st[0].best_reward, prev);
    prev = st[0].best_reward;
  }
}

TEST(Step, MyopicPoolingEqualizesState) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(6, 5);
  const auto rs = sim::ReplicationStreams(d, 3);
  std::vector<sim::AgentState> st(6);
  for (int t = 0; t <= 5; ++t) {
    st = sim::step(st, t, c, d, rs).states;
    for (const auto& s : st) EXPECT_EQ(s.best_reward, st[0].best_reward);
  }
}

TEST(Step, NonMyopicWithholdsBeforeSharingSlot) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(4, 10);
  c.kind = sim::AgentKind::kNonMyopic;
  c.thresholds = hill::nonmyopic::solve_one_time(d, 4, 10, 6);
  c.schedule = CommSchedule::one_time(10, 6);
  const auto rs = sim::ReplicationStreams(d, 5);
  std::vector<sim::AgentState> st(4);
  for (int t = 0; t <= 6; ++t) {
    st = sim::step(st, t, c, d, rs).states;
    if (t < 6) {
      // No agent ever holds another agent's option.
      for (int n = 0; n < 4; ++n) {
        EXPECT_EQ(st[n].best_option / (c.horizon + 1), n);
      }
    }
  }
  for (const auto& s : st) EXPECT_EQ(s.best_reward, st[0].best_reward);
}

TEST(Step, FreshOptionsEveryExploration) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(3, 20);
  c.schedule = CommSchedule(20, {{0, 20}});
  const auto rs = sim::ReplicationStreams(d, 77);
  std::vector<sim::AgentState> st(3);
  std::vector<std::int64_t> seen;
  for (int t = 0; t <= 20; ++t) {
    const auto before = st;
    st = sim::step(st, t, c, d, rs).states;
    for (int n = 0; n < 3; ++n) {
      if (st[n].explored_count > before[n].explored_count) {
        const std::int64_t id = n * 21 + before[n].explored_count;
        EXPECT_EQ(std::count(seen.begin(), seen.end(), id), 0);
        seen.push_back(id);
      }
    }
  }
}

TEST(Run, SameSeedBitIdentical) {
  const auto d = RewardDistribution::beta(2, 3);
  auto c = base_config(5, 15);
  c.schedule = CommSchedule(15, {{0, 3}});
  const auto a = sim::run(c, d);
  const auto b = sim::run(c, d);
  EXPECT_EQ(a.per_slot_mean_reward, b.per_slot_mean_reward);
  EXPECT_EQ(a.total_welfare_mean, b.total_welfare_mean);
  EXPECT_EQ(a.total_welfare_stderr, b.total_welfare_stderr);
}

TEST(Run, ThreadCountDoesNotChangeResults) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(4, 12);
  c.replications = 3000;
  c.threads = 1;
  const auto a = sim::run(c, d);
  c.threads = 4;
  const auto b = sim::run(c, d);
  EXPECT_EQ(a.per_slot_mean_reward, b.per_slot_mean_reward);
  EXPECT_EQ(a.total_welfare_mean, b.total_welfare_mean);
}

TEST(Run, TotalEqualsAgentsTimesSlotSum) {
  const auto d = RewardDistribution::uniform();
  const auto c = base_config(7, 9);
  const auto r = sim::run(c, d);
  double s = 0.0;
  for (double v : r.per_slot_mean_reward) s += v;
  EXPECT_NEAR(r.total_welfare_mean, 7 * s, 1e-9);
}

TEST(Run, StandardErrorScalesWithReplications) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(3, 10);
  c.schedule = CommSchedule::leading_window(10, 3);
  c.replications = 20000;
  const double a = sim::run(c, d).total_welfare_stderr;
  c.replications = 80000;
  const double b = sim::run(c, d).total_welfare_stderr;
  EXPECT_NEAR(a / b, 2.0, 0.1);
}

TEST(Run, MissingThresholdsIsConfigError) {
  auto c = base_config(2, 5);
  c.kind = sim::AgentKind::kNonMyopic;
  EXPECT_THROW(sim::run(c, RewardDistribution::uniform()), hill::ConfigError);
  c = base_config(2, 5);
  c.schedule = CommSchedule::centralized(6);
  EXPECT_THROW(sim::run(c, RewardDistribution::uniform()), hill::ConfigError);
}

// Expected total reward of one agent following thresholds u_1..u_T alone,
// by backward recursion on a grid (uniform prior).
double single_agent_value(const std::vector<double>& u) {
  const int horizon = static_cast<int>(u.size());
  const int g = 20001;
  std::vector<double> next(g, 0.0), cur(g);
  auto grid = [&](int i) { return double(i) / (g - 1); };
  for (int t = horizon; t >= 1; --t) {
    // tail[i] = ∫_{m_i}^1 next(r) dr by trapezoid.
    std::vector<double> tail(g, 0.0);
    for (int i = g - 2; i >= 0; --i) tail[i] = tail[i + 1] + 0.5 * (next[i] + next[i + 1]) / (g - 1);
    for (int i = 0; i < g; ++i) {
      const double m = grid(i);
      cur[i] = m >= u[t - 1] ? (horizon - t + 1) * m : 0.5 + m * next[i] + tail[i];
    }
    next = cur;
  }
  double v = 0.5;
  for (int i = 0; i + 1 < g; ++i) v += 0.5 * (next[i] + next[i + 1]) / (g - 1);
  return v;
}

TEST(Run, SingleAgentReproducesMdpValue) {
  const auto d = RewardDistribution::uniform();
  const auto u = hill::nonmyopic::solve_single_agent(d, 8);
  auto c = base_config(1, 8);
  c.kind = sim::AgentKind::kNonMyopic;
  c.thresholds = u;
  c.schedule = CommSchedule(8, {{0, 8}});
  c.replications = 200000;
  const auto r = sim::run(c, d);
  EXPECT_LT(std::abs(r.total_welfare_mean - single_agent_value(u.values)),
            3 * r.total_welfare_stderr);
}

TEST(Noise, StochasticObservationsStayInUnitInterval) {
  const auto d = RewardDistribution::beta(0.5, 0.5);
  auto c = base_config(3, 10);
  c.mode = sim::RewardMode::kStochastic;
  c.noise_sd = 0.5;
  const auto rs = sim::ReplicationStreams(d, 1);
  std::vector<sim::AgentState> st(3);
  for (int t = 0; t <= 10; ++t) {
    auto out = sim::step(st, t, c, d, rs);
    for (double r : out.rewards) {
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
    }
    st = out.states;
  }
}

TEST(Noise, ZeroNoiseMatchesDeterministic) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(4, 10);
  const auto a = sim::run(c, d);
  c.mode = sim::RewardMode::kHeterogeneous;
  c.pref_sd = 0.0;
  const auto b = sim::run(c, d);
  c.mode = sim::RewardMode::kStochastic;
  c.noise_sd = 0.0;
  c.noise_scope = sim::NoiseScope::kPerOption;
  const auto e = sim::run(c, d);
  EXPECT_EQ(a.total_welfare_mean, b.total_welfare_mean);
  EXPECT_EQ(a.total_welfare_mean, e.total_welfare_mean);
}

TEST(Compare, IdenticalConfigsGiveIdenticalSeries) {
  const auto d = RewardDistribution::uniform();
  auto c = base_config(5, 12);
  c.schedule = CommSchedule(12, {{0, 2}});
  const auto p = sim::trajectory_compare(c, c, d);
  EXPECT_EQ(p.mean_a, p.mean_b);
  EXPECT_EQ(p.total_diff, 0.0);
}

TEST(Compare, RejectsMismatchedShapes) {
  const auto d = RewardDistribution::uniform();
  EXPECT_THROW(sim::trajectory_compare(base_config(3, 10), base_config(4, 10), d),
               hill::ConfigError);
  EXPECT_THROW(sim::trajectory_compare(base_config(3, 10), base_config(3, 11), d),
               hill::ConfigError);
}

TEST(Compare, CommonRandomNumbersReduceVariance) {
  const auto d = RewardDistribution::uniform();
  auto a = base_config(5, 20);
  auto b = a;
  b.schedule = CommSchedule::leading_window(20, 3);
  a.replications = b.replications = 20000;
  const auto p = sim::trajectory_compare(a, b, d);
  const double independent = std::hypot(sim::run(a, d).total_welfare_stderr,
                                        sim::run(b, d).total_welfare_stderr);
  EXPECT_LT(p.total_diff_stderr, independent);
}

TEST(Csv, SimOutputCarriesMetadata) {
  const auto r = sim::run(base_config(2, 3), RewardDistribution::uniform());
  std::ostringstream os;
  hill::io::write_sim_csv(r, "seed=42\nN=2", os);
  EXPECT_EQ(os.str().rfind("# seed=42\n# N=2\nt,mean_reward_per_agent,stderr\n", 0), 0u);
}

}  // namespace
