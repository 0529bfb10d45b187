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

#ifndef HILL_SIM_HPP_
#define HILL_SIM_HPP_

// Monte-Carlo simulator of the multi-agent exploration game. Options form an
// unbounded stream of fresh i.i.d. draws from the prior; agents follow
// threshold policies and pool their best finds whenever the schedule and
// their sharing policy allow.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hill/distribution.hpp"
#include "hill/error.hpp"
#include "hill/rng.hpp"
#include "hill/schedule.hpp"
#include "hill/thresholds.hpp"

namespace hill::sim {

enum class AgentKind { kMyopic, kNonMyopic };
enum class RewardMode { kDeterministic, kStochastic, kHeterogeneous };
// Whether stochastic noise is redrawn on every observation or fixed per option.
enum class NoiseScope { kPerObservation, kPerOption };

inline const char* to_string(AgentKind k) {
  return k == AgentKind::kMyopic ? "myopic" : "nonmyopic";
}
inline const char* to_string(RewardMode m) {
  switch (m) {
    case RewardMode::kDeterministic: return "deterministic";
    case RewardMode::kStochastic: return "stochastic";
    case RewardMode::kHeterogeneous: return "heterogeneous";
  }
  return "?";
}
inline const char* to_string(NoiseScope s) {
  return s == NoiseScope::kPerObservation ? "per_observation" : "per_option";
}

struct AgentState {
  double best_reward = 0.0;       // perceived value of the best known option
  std::int64_t best_option = -1;  // -1 before the first exploration
  double best_base = 0.0;         // prior draw of that option
  int explored_count = 0;
};

struct SimConfig {
  int agents = 1;
  int horizon = 1;
  CommSchedule schedule = CommSchedule::centralized(1);
  AgentKind kind = AgentKind::kMyopic;
  std::optional<ThresholdSequence> thresholds;
  RewardMode mode = RewardMode::kDeterministic;
  double noise_sd = 0.1;
  NoiseScope noise_scope = NoiseScope::kPerObservation;
  double pref_sd = 0.0;
  int replications = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

struct SimResult {
  std::vector<double> per_slot_mean_reward;  // per agent, slots 0..T
  std::vector<double> per_slot_stderr;
  double total_welfare_mean = 0.0;  // summed over agents and slots
  double total_welfare_stderr = 0.0;
  double exploration_slots_mean = 0.0;  // per agent
  double exploration_slots_stderr = 0.0;
  int replications = 0;
};

inline void validate(const SimConfig& c) {
  if (c.agents < 1) throw ConfigError("must be >= 1", "N");
  if (c.horizon < 1) throw ConfigError("must be >= 1", "T");
  if (c.schedule.horizon() != c.horizon) {
    throw ConfigError("schedule horizon differs from T", "schedule.T");
  }
  if (c.replications < 1) throw ConfigError("must be >= 1", "replications");
  if (c.threads < 0) throw ConfigError("must be >= 0", "threads");
  if (!(c.noise_sd >= 0.0)) throw ConfigError("must be >= 0", "noise_sd");
  if (!(c.pref_sd >= 0.0)) throw ConfigError("must be >= 0", "pref_sd");
  if (c.kind == AgentKind::kNonMyopic) {
    if (!c.thresholds) {
      throw ConfigError("non-myopic agents need a threshold sequence", "thresholds");
    }
    if (static_cast<int>(c.thresholds->values.size()) != c.horizon) {
      throw ConfigError("threshold count must equal T", "thresholds");
    }
  }
}

// Counter-based draws for one replication. Streams are keyed by agent and
// per-agent exploration index so that two configurations run with the same
// seed see identical option rewards.
class ReplicationStreams {
 public:
  ReplicationStreams(const RewardDistribution& d, std::uint64_t seed)
      : dist_(&d), seed_(seed) {}

  static ReplicationStreams for_replication(const RewardDistribution& d,
                                            std::uint64_t master_seed,
                                            std::uint64_t replication) {
    return ReplicationStreams(d, counter_hash(master_seed, 0x5eedULL, replication));
  }

  double option_base(int agent, int index) const {
    return dist_->quantile(bits_to_open_unit(counter_hash(seed_, kOption, agent, index)));
  }
  // Agent-specific preference shock for an option.
  double preference_noise(int agent, std::int64_t option) const {
    return gaussian(kPreference, agent, option);
  }
  double observation_noise(int agent, int slot) const {
    return gaussian(kObservation, agent, slot);
  }
  double option_noise(std::int64_t option) const { return gaussian(kOptionNoise, option, 0); }

 private:
  static constexpr std::uint64_t kOption = 1;
  static constexpr std::uint64_t kPreference = 2;
  static constexpr std::uint64_t kObservation = 3;
  static constexpr std::uint64_t kOptionNoise = 4;

  double gaussian(std::uint64_t stream, std::int64_t a, std::int64_t b) const {
    const double u1 = bits_to_open_unit(counter_hash(seed_, stream, a, b, 0));
    const double u2 = bits_to_open_unit(counter_hash(seed_, stream, a, b, 1));
    return normal_from_unit(u1, u2);
  }

  const RewardDistribution* dist_;
  std::uint64_t seed_;
};

namespace detail {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline bool shares_at(const SimConfig& c, int t, int nonmyopic_slot) {
  if (c.kind == AgentKind::kMyopic) return !c.schedule.blocked(t);
  return t == nonmyopic_slot;
}

inline double threshold_at(const SimConfig& c, double mu, int t) {
  if (c.kind == AgentKind::kMyopic) return mu;
  return c.thresholds->values[static_cast<std::size_t>(t - 1)];
}

// Advances every agent through slot t in place and writes each agent's
// realized reward. Returns true if sharing took place at the end of t.
inline bool step_in_place(std::vector<AgentState>& states, int t,
                          const SimConfig& c, double mu, int nonmyopic_slot,
                          const ReplicationStreams& rs,
                          std::span<double> rewards) {
  const int n_agents = static_cast<int>(states.size());
  for (int n = 0; n < n_agents; ++n) {
    AgentState& s = states[n];
    const bool explore =
        s.best_option < 0 || t == 0 || s.best_reward < threshold_at(c, mu, t);
    if (explore) {
      const int index = s.explored_count++;
      const std::int64_t option =
          static_cast<std::int64_t>(n) * (c.horizon + 1) + index;
      const double base = rs.option_base(n, index);
      double observed = base;
      switch (c.mode) {
        case RewardMode::kDeterministic:
          break;
        case RewardMode::kStochastic:
          observed = c.noise_scope == NoiseScope::kPerObservation
                         ? clamp01(base + c.noise_sd * rs.observation_noise(n, t))
                         : clamp01(base + c.noise_sd * rs.option_noise(option));
          break;
        case RewardMode::kHeterogeneous:
          observed = clamp01(base + c.pref_sd * rs.preference_noise(n, option));
          break;
      }
      rewards[n] = observed;
      if (s.best_option < 0 || observed > s.best_reward) {
        s.best_reward = observed;
        s.best_option = option;
        s.best_base = base;
      }
    } else {
      double realized = s.best_base;
      switch (c.mode) {
        case RewardMode::kDeterministic:
          break;
        case RewardMode::kStochastic:
          realized = c.noise_scope == NoiseScope::kPerObservation
                         ? clamp01(s.best_base + c.noise_sd * rs.observation_noise(n, t))
                         : s.best_reward;
          break;
        case RewardMode::kHeterogeneous:
          realized = clamp01(s.best_base +
                             c.pref_sd * rs.preference_noise(n, s.best_option));
          break;
      }
      rewards[n] = realized;
    }
  }
  if (!shares_at(c, t, nonmyopic_slot)) return false;
  int best = 0;
  for (int n = 1; n < n_agents; ++n) {
    if (states[n].best_reward > states[best].best_reward) best = n;
  }
  const AgentState pooled = states[best];
  for (auto& s : states) {
    if (s.best_option != pooled.best_option) {
      s.best_reward = pooled.best_reward;
      s.best_option = pooled.best_option;
      s.best_base = pooled.best_base;
    }
  }
  return true;
}

}  // namespace detail

struct StepResult {
  std::vector<AgentState> states;
  std::vector<double> rewards;
};

// One slot of the game: explore iff below threshold, then pool if sharing
// happens at t (every open slot for myopic agents; only the last open slot
// before T for non-myopic agents, who withhold until then).
inline StepResult step(std::vector<AgentState> states, int t,
                       const SimConfig& config, const RewardDistribution& d,
                       const ReplicationStreams& streams) {
  validate(config);
  if (t < 0 || t > config.horizon) throw DomainError("slot outside [0, T]");
  if (static_cast<int>(states.size()) != config.agents) {
    throw ConfigError("state count differs from N", "N");
  }
  StepResult out;
  out.rewards.assign(states.size(), 0.0);
  detail::step_in_place(states, t, config, d.mean(),
                        config.schedule.last_open_slot(), streams, out.rewards);
  out.states = std::move(states);
  return out;
}

struct ReplicationOutcome {
  std::vector<double> slot_reward;  // summed over agents
  double total = 0.0;
  double exploration = 0.0;  // mean per agent
};

inline ReplicationOutcome run_replication(const SimConfig& c,
                                          const RewardDistribution& d,
                                          const ReplicationStreams& rs) {
  const double mu = d.mean();
  const int open = c.schedule.last_open_slot();
  std::vector<AgentState> states(static_cast<std::size_t>(c.agents));
  std::vector<double> rewards(static_cast<std::size_t>(c.agents));
  ReplicationOutcome out;
  out.slot_reward.assign(static_cast<std::size_t>(c.horizon) + 1, 0.0);
  for (int t = 0; t <= c.horizon; ++t) {
    detail::step_in_place(states, t, c, mu, open, rs, rewards);
    double sum = 0.0;
    for (double r : rewards) sum += r;
    out.slot_reward[t] = sum;
    out.total += sum;
  }
  double explored = 0.0;
  for (const auto& s : states) explored += s.explored_count;
  out.exploration = explored / c.agents;
  return out;
}

// Streaming mean/variance with an order-fixed merge (Chan et al.).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    if (count == 0.0) {
      *this = o;
      return;
    }
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
  double stderr_of_mean() const {
    if (count < 2.0) return 0.0;
    return std::sqrt(m2 / (count - 1.0) / count);
  }
};

namespace detail {

inline constexpr int kBlock = 256;

// Runs `body(rep, block_index)` over all replications in fixed-size blocks,
// optionally on several threads. Blocks are merged by the caller in index
// order, so results do not depend on the thread count.
template <typename Body>
void for_each_block(int replications, int threads, Body&& body) {
  const int blocks = (replications + kBlock - 1) / kBlock;
  int workers = threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                             : threads;
  workers = std::clamp(workers, 1, std::max(1, blocks));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int b = next++; b < blocks; b = next++) {
      const int lo = b * kBlock;
      const int hi = std::min(replications, lo + kBlock);
      for (int rep = lo; rep < hi; ++rep) body(rep, b);
    }
  };
  if (workers == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

struct BlockStats {
  Moments total;
  Moments exploration;
  std::vector<Moments> slots;
};

}  // namespace detail

inline SimResult run(const SimConfig& config, const RewardDistribution& d) {
  validate(config);
  const int blocks = (config.replications + detail::kBlock - 1) / detail::kBlock;
  std::vector<detail::BlockStats> stats(static_cast<std::size_t>(blocks));
  for (auto& s : stats) s.slots.resize(static_cast<std::size_t>(config.horizon) + 1);
  detail::for_each_block(config.replications, config.threads, [&](int rep, int b) {
    const auto rs = ReplicationStreams::for_replication(d, config.master_seed, rep);
    const auto o = run_replication(config, d, rs);
    auto& s = stats[b];
    s.total.add(o.total);
    s.exploration.add(o.exploration);
    for (std::size_t t = 0; t < o.slot_reward.size(); ++t) {
      s.slots[t].add(o.slot_reward[t] / config.agents);
    }
  });
  detail::BlockStats all;
  all.slots.resize(static_cast<std::size_t>(config.horizon) + 1);
  for (const auto& s : stats) {
    all.total.merge(s.total);
    all.exploration.merge(s.exploration);
    for (std::size_t t = 0; t < s.slots.size(); ++t) all.slots[t].merge(s.slots[t]);
  }
  SimResult out;
  out.replications = config.replications;
  out.total_welfare_mean = all.total.mean;
  out.total_welfare_stderr = all.total.stderr_of_mean();
  out.exploration_slots_mean = all.exploration.mean;
  out.exploration_slots_stderr = all.exploration.stderr_of_mean();
  for (const auto& m : all.slots) {
    out.per_slot_mean_reward.push_back(m.mean);
    out.per_slot_stderr.push_back(m.stderr_of_mean());
  }
  return out;
}

struct PairedSeries {
  std::vector<double> mean_a;  // per agent, slots 0..T
  std::vector<double> mean_b;
  std::vector<double> diff_stderr;  // stderr of the paired difference a - b
  double total_a = 0.0;
  double total_b = 0.0;
  double total_diff = 0.0;  // mean of paired total welfare difference a - b
  double total_diff_stderr = 0.0;
  int replications = 0;
};

// Runs two configurations on common random numbers: replication r of both
// uses the seed of `a`, so option draws are shared.
inline PairedSeries trajectory_compare(const SimConfig& a, const SimConfig& b,
                                       const RewardDistribution& d) {
  validate(a);
  validate(b);
  if (a.agents != b.agents || a.horizon != b.horizon) {
    throw ConfigError("paired configurations must share N and T", "N/T");
  }
  if (a.mode != b.mode) {
    throw ConfigError("paired configurations must share the reward mode", "reward_mode");
  }
  const int reps = a.replications;
  const int blocks = (reps + detail::kBlock - 1) / detail::kBlock;
  struct PairStats {
    Moments ta, tb, td;
    std::vector<Moments> sa, sb, sd;
  };
  const std::size_t slots = static_cast<std::size_t>(a.horizon) + 1;
  std::vector<PairStats> stats(static_cast<std::size_t>(blocks));
  for (auto& s : stats) {
    s.sa.resize(slots);
    s.sb.resize(slots);
    s.sd.resize(slots);
  }
  detail::for_each_block(reps, a.threads, [&](int rep, int blk) {
    const auto rs = ReplicationStreams::for_replication(d, a.master_seed, rep);
    const auto oa = run_replication(a, d, rs);
    const auto ob = run_replication(b, d, rs);
    auto& s = stats[blk];
    s.ta.add(oa.total);
    s.tb.add(ob.total);
    s.td.add(oa.total - ob.total);
    for (std::size_t t = 0; t < slots; ++t) {
      s.sa[t].add(oa.slot_reward[t] / a.agents);
      s.sb[t].add(ob.slot_reward[t] / a.agents);
      s.sd[t].add((oa.slot_reward[t] - ob.slot_reward[t]) / a.agents);
    }
  });
  PairStats all;
  all.sa.resize(slots);
  all.sb.resize(slots);
  all.sd.resize(slots);
  for (const auto& s : stats) {
    all.ta.merge(s.ta);
    all.tb.merge(s.tb);
    all.td.merge(s.td);
    for (std::size_t t = 0; t < slots; ++t) {
      all.sa[t].merge(s.sa[t]);
      all.sb[t].merge(s.sb[t]);
      all.sd[t].merge(s.sd[t]);
    }
  }
  PairedSeries out;
  out.replications = reps;
  out.total_a = all.ta.mean;
  out.total_b = all.tb.mean;
  out.total_diff = all.td.mean;
  out.total_diff_stderr = all.td.stderr_of_mean();
  for (std::size_t t = 0; t < slots; ++t) {
    out.mean_a.push_back(all.sa[t].mean);
    out.mean_b.push_back(all.sb[t].mean);
    out.diff_stderr.push_back(all.sd[t].stderr_of_mean());
  }
  return out;
}

}  // namespace hill::sim

#endif  // HILL_SIM_HPP_
