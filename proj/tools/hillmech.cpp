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


// hillmech: fit reward priors, optimize communication mechanisms, simulate
// and sweep. Exit codes: 0 success, 2 invalid input, 3 solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hill.hpp"

namespace {

using hill::RewardDistribution;
using nlohmann::json;

constexpr int kInvalid = 2;
constexpr int kSolver = 3;

// Writes to `path`, or stdout when the path is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw hill::ConfigError("cannot open '" + path + "' for writing", "out");
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string meta_line(const json& config) { return "config " + config.dump(); }

std::string mechanism_label(const hill::CommSchedule& s) {
  if (s.is_centralized()) return "centralized";
  std::string out = "windows=";
  for (std::size_t i = 0; i < s.windows().size(); ++i) {
    if (i) out += ';';
    out += std::to_string(s.windows()[i].start) + ':' + std::to_string(s.windows()[i].length);
  }
  return out;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  std::string data, out;
  double bandwidth = 0.0;
  int grid = 512;
  hill::ingest::ColumnMapping map;
};

int cmd_fit(const FitArgs& a) {
  const auto table = hill::ingest::load_ratings(a.data, a.map);
  std::optional<double> bw;
  if (a.bandwidth > 0.0) bw = a.bandwidth;
  const auto fit = hill::ingest::fit_reward_cdf(table, bw, a.grid);
  json config{{"command", "fit"},        {"data", a.data},
              {"grid", a.grid},          {"bandwidth", a.bandwidth},
              {"columns", {{"hotel_id", a.map.hotel_id},
                           {"avg_rating", a.map.avg_rating},
                           {"rating_scale_max", a.map.scale_max},
                           {"n_reviews", a.map.n_reviews},
                           {"rating_sd", a.map.rating_sd}}},
              {"scale_max", a.map.scale_max_value}};
  json meta = config;
  meta["rows"] = table.size();
  std::istringstream lines(fit.metadata());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    meta["fit"][line.substr(0, eq)] = line.substr(eq + 1);
  }
  try {
    meta["pref_sd"] = hill::format_double(hill::ingest::estimate_pref_sd(table));
  } catch (const hill::DomainError& e) {
    meta["pref_sd"] = nullptr;
    meta["pref_sd_note"] = e.what();
  }
  {
    Sink sink(a.out);
    hill::io::write_comment_block(meta_line(config) + "\n" + fit.metadata(), sink.os());
    hill::save_cdf_csv(fit.distribution, sink.os());
  }
  if (!a.out.empty() && a.out != "-") {
    Sink side(a.out + ".meta.json");
    side.os() << meta.dump(2) << '\n';
  }
  std::cerr << "fitted " << table.size() << " ratings, mean "
            << hill::format_double(fit.distribution.mean()) << '\n';
  return 0;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeArgs {
  std::string dist = "uniform";
  int agents = 5, horizon = 20;
  std::string mode = "myopic-approx";
  std::string out, thresholds_out;
  int max_horizon = 14;
};

int cmd_optimize(const OptimizeArgs& a) {
  const auto d = hill::config::parse_distribution(a.dist);
  json config{{"command", "optimize"}, {"dist", a.dist}, {"N", a.agents},
              {"T", a.horizon},        {"mode", a.mode}, {"mu", hill::format_double(d.mean())}};
  auto& out = std::cout;
  std::ostringstream scan;
  hill::io::write_comment_block(meta_line(config), scan);
  if (a.mode == "myopic-approx" || a.mode == "myopic-exact") {
    const auto approx = hill::myopic::optimize_single_window(d, a.agents, a.horizon);
    hill::CommSchedule chosen = approx.schedule;
    double welfare = approx.welfare;
    if (a.mode == "myopic-exact") {
      hill::myopic::ExactOptions opt;
      opt.max_horizon = a.max_horizon;
      const auto exact = hill::myopic::optimize_exact(d, a.agents, a.horizon, opt);
      chosen = exact.schedule;
      welfare = exact.welfare;
      out << "approx_welfare " << hill::format_double(approx.welfare) << '\n';
      out << "approx_ratio_bound "
          << hill::format_double(hill::myopic::approximation_ratio(d, a.agents, a.horizon))
          << '\n';
    }
    out << "mechanism " << (chosen.is_centralized() ? "centralized optimal" : mechanism_label(chosen))
        << '\n';
    out << "schedule " << chosen.to_string() << '\n';
    out << "welfare " << hill::format_double(welfare) << '\n';
    out << "centralized_welfare " << hill::format_double(approx.centralized_welfare) << '\n';
    out << "gain " << hill::format_double(welfare - approx.centralized_welfare) << '\n';
    scan << "delta,gain,welfare\n";
    for (std::size_t i = 0; i < approx.scan.size(); ++i) {
      scan << i + 1 << ',' << hill::format_double(approx.scan[i]) << ','
           << hill::format_double(approx.centralized_welfare + approx.scan[i]) << '\n';
    }
  } else if (a.mode == "nonmyopic") {
    const auto r = hill::nonmyopic::optimize_comm_time(d, a.agents, a.horizon);
    const auto& central = r.scan.back();
    if (!central.solved) throw hill::SolverError("centralized sequence failed: " + central.error);
    bool any_failed = false;
    scan << "T1,welfare,exploration_slots,status\n";
    for (const auto& c : r.scan) {
      scan << c.comm_slot << ',' << hill::format_double(c.welfare) << ','
           << hill::format_double(c.exploration_slots) << ','
           << (c.solved ? "ok" : "failed: " + c.error) << '\n';
      any_failed = any_failed || !c.solved;
    }
    out << "mechanism T1=" << r.best_comm_slot
        << (r.best_comm_slot == a.horizon - 1 ? " (centralized optimal)" : "") << '\n';
    out << "welfare " << hill::format_double(r.welfare) << '\n';
    out << "centralized_welfare " << hill::format_double(central.welfare) << '\n';
    out << "gain " << hill::format_double(r.welfare - central.welfare) << '\n';
    out << "exploration_slots " << hill::format_double(r.exploration_slots) << '\n';
    if (any_failed) {
      for (const auto& c : r.scan) {
        if (!c.solved) std::cerr << "T1=" << c.comm_slot << " failed: " << c.error << '\n';
      }
    }
    if (!a.thresholds_out.empty()) {
      Sink t(a.thresholds_out);
      hill::io::write_comment_block(meta_line(config), t.os());
      hill::nonmyopic::write_thresholds_csv(r.thresholds, t.os());
    }
  } else {
    throw hill::ConfigError("expected myopic-approx, myopic-exact or nonmyopic", "mode");
  }
  if (!a.out.empty()) {
    Sink s(a.out);
    s.os() << scan.str();
  }
  return 0;
}

// ---- simulate --------------------------------------------------------------

struct Prepared {
  RewardDistribution dist;
  hill::sim::SimConfig config;
  std::string label;
};

// Builds the mechanism's simulation config plus its centralized twin.
std::pair<Prepared, Prepared> prepare(const hill::config::SimulateSpec& s) {
  auto d = hill::config::parse_distribution(s.dist);
  hill::sim::SimConfig c;
  c.agents = s.agents;
  c.horizon = s.horizon;
  c.kind = hill::config::parse_kind(s.kind);
  c.mode = hill::config::parse_mode(s.mode);
  c.noise_sd = s.noise_sd;
  c.noise_scope = hill::config::parse_scope(s.noise_scope);
  c.pref_sd = s.pref_sd;
  c.replications = s.replications;
  c.master_seed = s.seed;
  c.threads = s.threads;
  if (c.agents < 1) throw hill::ConfigError("must be >= 1", "N");
  if (c.horizon < 2) throw hill::ConfigError("must be >= 2", "T");
  if (s.schedule && s.comm_slot) {
    throw hill::ConfigError("give either schedule or comm_slot", "schedule");
  }
  hill::sim::SimConfig central = c;
  central.schedule = hill::CommSchedule::centralized(c.horizon);
  c.schedule = central.schedule;
  if (s.schedule) c.schedule = hill::CommSchedule::from_json(*s.schedule);
  if (s.comm_slot) {
    if (*s.comm_slot < 1 || *s.comm_slot > c.horizon - 1) {
      throw hill::ConfigError("must lie in [1, T-1]", "comm_slot");
    }
    c.schedule = hill::CommSchedule::one_time(c.horizon, *s.comm_slot);
  }
  if (c.kind == hill::sim::AgentKind::kNonMyopic) {
    if (s.schedule) throw hill::ConfigError("non-myopic agents take comm_slot", "schedule");
    const int t1 = s.comm_slot.value_or(c.horizon - 1);
    central.thresholds = hill::nonmyopic::solve_centralized_nonmyopic(d, c.agents, c.horizon);
    c.thresholds = t1 == c.horizon - 1
                       ? *central.thresholds
                       : hill::nonmyopic::solve_one_time(d, c.agents, c.horizon, t1);
  }
  std::string label = c.kind == hill::sim::AgentKind::kNonMyopic
                          ? (s.comm_slot ? "T1=" + std::to_string(*s.comm_slot) : "centralized")
                          : mechanism_label(c.schedule);
  return {Prepared{d, c, label}, Prepared{d, central, "centralized"}};
}

struct SimulateArgs {
  std::string config_path, out, svg;
  std::optional<int> agents, horizon, replications, threads, comm_slot;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dist, kind, mode, noise_scope;
  std::optional<double> noise_sd, pref_sd;
  bool compare = false;
};

int cmd_simulate(const SimulateArgs& a) {
  auto s = hill::config::load_simulate_spec(a.config_path);
  if (a.dist) s.dist = *a.dist;
  if (a.agents) s.agents = *a.agents;
  if (a.horizon) s.horizon = *a.horizon;
  if (a.replications) s.replications = *a.replications;
  if (a.threads) s.threads = *a.threads;
  if (a.seed) s.seed = *a.seed;
  if (a.kind) s.kind = *a.kind;
  if (a.mode) s.mode = *a.mode;
  if (a.noise_scope) s.noise_scope = *a.noise_scope;
  if (a.noise_sd) s.noise_sd = *a.noise_sd;
  if (a.pref_sd) s.pref_sd = *a.pref_sd;
  if (a.comm_slot) {
    s.comm_slot = *a.comm_slot;
    s.schedule.reset();
  }
  if (a.compare) s.compare_centralized = true;
  auto [mech, central] = prepare(s);
  json config = s.to_json();
  config["command"] = "simulate";
  config.erase("threads");  // never changes results
  std::vector<hill::io::Series> series;
  std::vector<double> xs(static_cast<std::size_t>(s.horizon) + 1);
  for (std::size_t t = 0; t < xs.size(); ++t) xs[t] = static_cast<double>(t);
  {
    Sink sink(a.out);
    if (s.compare_centralized) {
      const auto p = hill::sim::trajectory_compare(mech.config, central.config, mech.dist);
      std::ostringstream meta;
      meta << meta_line(config) << "\nmechanism=" << mech.label
           << "\ntotal_mechanism=" << hill::format_double(p.total_a)
           << "\ntotal_centralized=" << hill::format_double(p.total_b)
           << "\ngain=" << hill::format_double(p.total_diff)
           << "\ngain_stderr=" << hill::format_double(p.total_diff_stderr);
      hill::io::write_comment_block(meta.str(), sink.os());
      sink.os() << "t,mechanism,centralized,diff_stderr\n";
      for (std::size_t t = 0; t < p.mean_a.size(); ++t) {
        sink.os() << t << ',' << hill::format_double(p.mean_a[t]) << ','
                  << hill::format_double(p.mean_b[t]) << ','
                  << hill::format_double(p.diff_stderr[t]) << '\n';
      }
      series.push_back({mech.label, xs, p.mean_a});
      series.push_back({"centralized", xs, p.mean_b});
    } else {
      const auto r = hill::sim::run(mech.config, mech.dist);
      std::ostringstream meta;
      meta << meta_line(config) << "\nmechanism=" << mech.label
           << "\ntotal_welfare=" << hill::format_double(r.total_welfare_mean)
           << "\ntotal_welfare_stderr=" << hill::format_double(r.total_welfare_stderr)
           << "\nexploration_slots=" << hill::format_double(r.exploration_slots_mean);
      hill::io::write_sim_csv(r, meta.str(), sink.os());
      series.push_back({mech.label, xs, r.per_slot_mean_reward});
    }
  }
  if (!a.svg.empty()) {
    Sink svg(a.svg);
    hill::io::write_svg(series, "mean reward per agent by slot", svg.os());
  }
  return 0;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string dist = "uniform";
  int agents = 5;
  std::vector<int> horizons;
  std::string kind = "myopic";
  std::string method = "analytic";
  std::string mode = "deterministic";
  double noise_sd = 0.1, pref_sd = 0.1;
  std::string noise_scope = "per_observation";
  int replications = 500, threads = 1;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  const auto d = hill::config::parse_distribution(a.dist);
  const auto kind = hill::config::parse_kind(a.kind);
  if (a.method != "analytic" && a.method != "simulate") {
    throw hill::ConfigError("expected analytic or simulate", "method");
  }
  if (a.method == "analytic" && a.mode != "deterministic") {
    throw hill::ConfigError("noisy reward modes need --method simulate", "mode");
  }
  if (a.horizons.empty()) throw hill::ConfigError("no horizons given", "T");
  json config{{"command", "sweep"}, {"dist", a.dist},     {"N", a.agents},
              {"T", a.horizons},    {"kind", a.kind},     {"method", a.method},
              {"mode", a.mode}};
  if (a.method == "simulate") {
    config["replications"] = a.replications;
    config["seed"] = a.seed;
    config["noise_sd"] = a.noise_sd;
    config["pref_sd"] = a.pref_sd;
    config["noise_scope"] = a.noise_scope;
  }
  std::ostringstream body;
  hill::io::write_comment_block(meta_line(config), body);
  body << "T,mechanism,centralized_welfare,mechanism_welfare,gain,gain_stderr\n";
  for (int horizon : a.horizons) {
    std::string label;
    double v0 = 0.0, v1 = 0.0, se = 0.0;
    std::optional<int> t1;
    hill::CommSchedule schedule = hill::CommSchedule::centralized(horizon);
    if (kind == hill::sim::AgentKind::kMyopic) {
      const auto m = hill::myopic::optimize_single_window(d, a.agents, horizon);
      schedule = m.schedule;
      label = mechanism_label(schedule);
      v0 = m.centralized_welfare;
      v1 = m.welfare;
    } else {
      const auto m = hill::nonmyopic::optimize_comm_time(d, a.agents, horizon);
      t1 = m.best_comm_slot;
      label = "T1=" + std::to_string(*t1);
      v0 = m.scan.back().welfare;
      v1 = m.welfare;
    }
    if (a.method == "simulate") {
      hill::config::SimulateSpec s;
      s.dist = a.dist;
      s.agents = a.agents;
      s.horizon = horizon;
      s.kind = a.kind;
      s.mode = a.mode;
      s.noise_sd = a.noise_sd;
      s.pref_sd = a.pref_sd;
      s.noise_scope = a.noise_scope;
      s.replications = a.replications;
      s.seed = a.seed;
      s.threads = a.threads;
      if (t1) s.comm_slot = *t1;
      else if (!schedule.is_centralized()) s.schedule = schedule.to_json();
      auto [mech, central] = prepare(s);
      const auto p = hill::sim::trajectory_compare(mech.config, central.config, mech.dist);
      v0 = p.total_b;
      v1 = p.total_a;
      se = p.total_diff_stderr;
    }
    body << horizon << ',' << label << ',' << hill::format_double(v0) << ','
         << hill::format_double(v1) << ',' << hill::format_double(v1 - v0) << ','
         << hill::format_double(se) << '\n';
  }
  Sink sink(a.out);
  sink.os() << body.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hillmech: communication mechanisms for multi-agent exploration"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit a reward prior from a ratings CSV");
  f->add_option("--data", fit.data, "Ratings CSV")->required()->check(CLI::ExistingFile);
  f->add_option("--out", fit.out, "Output r,cdf CSV (a .meta.json sidecar is written next to it)")
      ->required();
  f->add_option("--bandwidth", fit.bandwidth, "KDE bandwidth; 0 selects Silverman's rule");
  f->add_option("--grid", fit.grid, "Number of CDF grid points")->capture_default_str();
  f->add_option("--col-id", fit.map.hotel_id, "Hotel id column")->capture_default_str();
  f->add_option("--col-rating", fit.map.avg_rating, "Average rating column")
      ->capture_default_str();
  f->add_option("--col-scale", fit.map.scale_max, "Rating scale maximum column")
      ->capture_default_str();
  f->add_option("--col-reviews", fit.map.n_reviews, "Review count column")
      ->capture_default_str();
  f->add_option("--col-sd", fit.map.rating_sd, "Rating standard deviation column")
      ->capture_default_str();
  f->add_option("--scale-max", fit.map.scale_max_value,
                "Scale maximum when the scale column is absent")
      ->capture_default_str();

  OptimizeArgs opt;
  auto* o = app.add_subcommand("optimize", "Choose a communication mechanism");
  o->add_option("--dist", opt.dist, "uniform | beta:A,B | beta-mean:M[,CONC] | file:PATH")
      ->capture_default_str();
  o->add_option("-N,--agents", opt.agents, "Number of agents")->capture_default_str();
  o->add_option("-T,--horizon", opt.horizon, "Horizon T (slots 0..T)")->capture_default_str();
  o->add_option("--mode", opt.mode, "myopic-approx | myopic-exact | nonmyopic")
      ->capture_default_str();
  o->add_option("--out", opt.out, "CSV of the full scan");
  o->add_option("--thresholds", opt.thresholds_out, "CSV of the chosen thresholds (nonmyopic)");
  o->add_option("--max-horizon", opt.max_horizon, "Largest T accepted by myopic-exact")
      ->capture_default_str();

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run Monte-Carlo replications from a JSON config");
  s->add_option("--config", sim.config_path, "JSON config with schema_version 1")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--out", sim.out, "Per-slot CSV (stdout if omitted)");
  s->add_option("--svg", sim.svg, "Also draw the per-slot curves as SVG");
  s->add_option("--dist", sim.dist, "Override dist");
  s->add_option("-N,--agents", sim.agents, "Override N");
  s->add_option("-T,--horizon", sim.horizon, "Override T");
  s->add_option("--replications", sim.replications, "Override replications");
  s->add_option("--seed", sim.seed, "Override seed");
  s->add_option("--threads", sim.threads, "Worker threads (0 = hardware); results do not depend on it");
  s->add_option("--kind", sim.kind, "Override kind (myopic | nonmyopic)");
  s->add_option("--mode", sim.mode, "Override mode (deterministic | stochastic | heterogeneous)");
  s->add_option("--noise-sd", sim.noise_sd, "Override noise_sd");
  s->add_option("--noise-scope", sim.noise_scope, "Override noise_scope (per_observation | per_option)");
  s->add_option("--pref-sd", sim.pref_sd, "Override pref_sd");
  s->add_option("--comm-slot", sim.comm_slot, "Override comm_slot (replaces schedule)");
  s->add_flag("--compare", sim.compare, "Pair the run against centralized sharing");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Mechanism gain over centralized sharing across horizons");
  w->add_option("--dist", sw.dist, "uniform | beta:A,B | beta-mean:M[,CONC] | file:PATH")
      ->capture_default_str();
  w->add_option("-N,--agents", sw.agents, "Number of agents")->capture_default_str();
  w->add_option("-T,--horizons", sw.horizons, "Horizons to evaluate")
      ->required()
      ->delimiter(',');
  w->add_option("--kind", sw.kind, "myopic | nonmyopic")->capture_default_str();
  w->add_option("--method", sw.method, "analytic | simulate")->capture_default_str();
  w->add_option("--mode", sw.mode, "deterministic | stochastic | heterogeneous")
      ->capture_default_str();
  w->add_option("--noise-sd", sw.noise_sd, "Observation noise sd")->capture_default_str();
  w->add_option("--noise-scope", sw.noise_scope, "per_observation | per_option")
      ->capture_default_str();
  w->add_option("--pref-sd", sw.pref_sd, "Preference noise sd")->capture_default_str();
  w->add_option("--replications", sw.replications, "Replications per horizon")
      ->capture_default_str();
  w->add_option("--seed", sw.seed, "Master seed")->capture_default_str();
  w->add_option("--threads", sw.threads, "Worker threads")->capture_default_str();
  w->add_option("--out", sw.out, "Output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (f->parsed()) return cmd_fit(fit);
    if (o->parsed()) return cmd_optimize(opt);
    if (s->parsed()) return cmd_simulate(sim);
    if (w->parsed()) return cmd_sweep(sw);
  } catch (const hill::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const hill::ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const hill::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
