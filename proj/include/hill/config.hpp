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


#ifndef HILL_CONFIG_HPP_
#define HILL_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "hill/distribution.hpp"
#include "hill/error.hpp"
#include "hill/schedule.hpp"
#include "hill/sim.hpp"

// Text forms of distributions and simulation configs used by the CLI.
namespace hill::config {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline double number(const std::string& s, const std::string& field) {
  try {
    return hill::detail::parse_double_field(s, 0);
  } catch (const LoadError&) {
    throw ConfigError("not a number: '" + s + "'", field);
  }
}

}  // namespace detail

// uniform | beta:A,B | beta-mean:M[,CONC] | file:PATH (an r,cdf CSV)
inline RewardDistribution parse_distribution(const std::string& spec,
                                             const std::string& field = "dist") {
  if (spec == "uniform") return RewardDistribution::uniform();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("unknown distribution '" + spec + "'", field);
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "file") return load_cdf_csv(arg);
  const auto comma = arg.find(',');
  try {
    if (kind == "beta") {
      if (comma == std::string::npos) throw ConfigError("beta needs 'beta:A,B'", field);
      return RewardDistribution::beta(detail::number(arg.substr(0, comma), field),
                                      detail::number(arg.substr(comma + 1), field));
    }
    if (kind == "beta-mean") {
      if (comma == std::string::npos) {
        return RewardDistribution::beta_with_mean(detail::number(arg, field));
      }
      return RewardDistribution::beta_with_mean(detail::number(arg.substr(0, comma), field),
                                                detail::number(arg.substr(comma + 1), field));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), field);
  }
  throw ConfigError("unknown distribution kind '" + kind + "'", field);
}

inline sim::AgentKind parse_kind(const std::string& s, const std::string& field = "kind") {
  if (s == "myopic") return sim::AgentKind::kMyopic;
  if (s == "nonmyopic") return sim::AgentKind::kNonMyopic;
  throw ConfigError("expected myopic or nonmyopic, got '" + s + "'", field);
}

inline sim::RewardMode parse_mode(const std::string& s, const std::string& field = "mode") {
  if (s == "deterministic") return sim::RewardMode::kDeterministic;
  if (s == "stochastic") return sim::RewardMode::kStochastic;
  if (s == "heterogeneous") return sim::RewardMode::kHeterogeneous;
  throw ConfigError("expected deterministic, stochastic or heterogeneous, got '" + s + "'",
                    field);
}

inline sim::NoiseScope parse_scope(const std::string& s,
                                   const std::string& field = "noise_scope") {
  if (s == "per_observation") return sim::NoiseScope::kPerObservation;
  if (s == "per_option") return sim::NoiseScope::kPerOption;
  throw ConfigError("expected per_observation or per_option, got '" + s + "'", field);
}

// A simulation experiment as read from a JSON file. Either `schedule` or
// `comm_slot` describes the mechanism; neither means centralized sharing.
// With `compare_centralized` the run is paired against centralized sharing.
struct SimulateSpec {
  std::string dist = "uniform";
  int agents = 5;
  int horizon = 20;
  std::string kind = "myopic";
  std::optional<nlohmann::json> schedule;
  std::optional<int> comm_slot;
  std::string mode = "deterministic";
  double noise_sd = 0.1;
  std::string noise_scope = "per_observation";
  double pref_sd = 0.0;
  int replications = 500;
  std::uint64_t seed = 1;
  int threads = 1;
  bool compare_centralized = false;

  nlohmann::json to_json() const {
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"dist", dist},
                     {"N", agents},
                     {"T", horizon},
                     {"kind", kind},
                     {"mode", mode},
                     {"noise_sd", noise_sd},
                     {"noise_scope", noise_scope},
                     {"pref_sd", pref_sd},
                     {"replications", replications},
                     {"seed", seed},
                     {"threads", threads},
                     {"compare_centralized", compare_centralized}};
    if (schedule) j["schedule"] = *schedule;
    if (comm_slot) j["comm_slot"] = *comm_slot;
    return j;
  }
};

namespace detail {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("wrong type", key);
  }
}

}  // namespace detail

inline SimulateSpec parse_simulate_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema_version")) throw ConfigError("missing", "schema_version");
  if (j.at("schema_version") != kSchemaVersion) {
    throw ConfigError("unsupported version (expected 1)", "schema_version");
  }
  static const char* kKnown[] = {"schema_version", "dist",          "N",        "T",
                                 "kind",           "schedule",      "comm_slot", "mode",
                                 "noise_sd",       "noise_scope",   "pref_sd",  "replications",
                                 "seed",           "threads",       "compare_centralized"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown key", item.key());
  }
  SimulateSpec s;
  detail::read(j, "dist", s.dist);
  detail::read(j, "N", s.agents);
  detail::read(j, "T", s.horizon);
  detail::read(j, "kind", s.kind);
  detail::read(j, "mode", s.mode);
  detail::read(j, "noise_sd", s.noise_sd);
  detail::read(j, "noise_scope", s.noise_scope);
  detail::read(j, "pref_sd", s.pref_sd);
  detail::read(j, "replications", s.replications);
  detail::read(j, "seed", s.seed);
  detail::read(j, "threads", s.threads);
  detail::read(j, "compare_centralized", s.compare_centralized);
  if (j.contains("schedule")) s.schedule = j.at("schedule");
  if (j.contains("comm_slot")) {
    int v = 0;
    detail::read(j, "comm_slot", v);
    s.comm_slot = v;
  }
  return s;
}

inline SimulateSpec load_simulate_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'", "config");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), "config");
  }
  return parse_simulate_spec(j);
}

}  // namespace hill::config

#endif  // HILL_CONFIG_HPP_
