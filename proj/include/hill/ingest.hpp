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

#ifndef HILL_INGEST_HPP_
#define HILL_INGEST_HPP_

// Ratings tables and kernel density fits of the reward prior.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hill/distribution.hpp"
#include "hill/error.hpp"

namespace hill::ingest {

struct RatingRow {
  std::string hotel_id;
  double avg_rating = 0.0;  // raw scale
  double scale_max = 1.0;
  long n_reviews = 0;
  std::optional<double> rating_sd;  // raw scale

  double normalized() const { return avg_rating / scale_max; }
};

struct RatingsTable {
  std::vector<RatingRow> rows;

  std::size_t size() const { return rows.size(); }
  std::vector<double> normalized_ratings() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.normalized());
    return out;
  }
};

// Names of the CSV columns holding each field. Empty optional columns are
// skipped; `scale_max_value` applies when no scale column is named.
struct ColumnMapping {
  std::string hotel_id = "hotel_id";
  std::string avg_rating = "avg_rating";
  std::string scale_max = "rating_scale_max";
  std::string n_reviews = "n_reviews";
  std::string rating_sd = "rating_sd";
  double scale_max_value = 10.0;
};

namespace detail {

// Splits one CSV record, honouring double quotes.
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(hill::detail::trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(hill::detail::trim(cur));
  return out;
}

inline long parse_count(const std::string& field, int line) {
  const double v = hill::detail::parse_double_field(field, line);
  if (v < 0.0 || v != std::floor(v)) {
    throw LoadError("review count must be a nonnegative integer: '" + field + "'", line);
  }
  return static_cast<long>(v);
}

}  // namespace detail

inline RatingsTable load_ratings(std::istream& in, const ColumnMapping& map = {}) {
  std::string header;
  if (!std::getline(in, header) || hill::detail::trim(header).empty()) {
    throw LoadError("empty ratings file", 1);
  }
  const auto names = detail::split_csv(header);
  auto find = [&](const std::string& name, bool required) -> int {
    if (name.empty()) {
      if (required) throw LoadError("required column mapping is empty", 1);
      return -1;
    }
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      if (required) throw LoadError("missing column '" + name + "'", 1);
      return -1;
    }
    return static_cast<int>(it - names.begin());
  };
  const int c_id = find(map.hotel_id, true);
  const int c_avg = find(map.avg_rating, true);
  const int c_scale = find(map.scale_max, false);
  const int c_n = find(map.n_reviews, false);
  const int c_sd = find(map.rating_sd, false);
  if (c_scale < 0 && !(map.scale_max_value > 0.0)) {
    throw LoadError("no scale column and no positive default scale", 1);
  }

  RatingsTable table;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (hill::detail::trim(line).empty()) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != names.size()) {
      throw LoadError("expected " + std::to_string(names.size()) + " fields, got " +
                          std::to_string(f.size()),
                      lineno);
    }
    RatingRow row;
    row.hotel_id = f[c_id];
    row.avg_rating = hill::detail::parse_double_field(f[c_avg], lineno);
    row.scale_max = c_scale >= 0 ? hill::detail::parse_double_field(f[c_scale], lineno)
                                 : map.scale_max_value;
    if (!(row.scale_max > 0.0)) throw LoadError("rating scale must be positive", lineno);
    if (!(row.avg_rating >= 0.0 && row.avg_rating <= row.scale_max)) {
      throw LoadError("rating outside [0, scale max]", lineno);
    }
    if (c_n >= 0) row.n_reviews = detail::parse_count(f[c_n], lineno);
    if (c_sd >= 0 && !f[c_sd].empty()) {
      const double sd = hill::detail::parse_double_field(f[c_sd], lineno);
      if (!(sd >= 0.0)) throw LoadError("rating sd must be >= 0", lineno);
      row.rating_sd = sd;
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw LoadError("ratings file has no data rows", lineno);
  return table;
}

inline RatingsTable load_ratings(const std::string& path, const ColumnMapping& map = {}) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path, 0);
  return load_ratings(in, map);
}

struct KdeFit {
  RewardDistribution distribution = RewardDistribution::uniform();
  double bandwidth = 0.0;
  bool silverman = true;
  std::size_t samples = 0;
  int grid_points = 0;

  std::string metadata() const {
    std::ostringstream os;
    os << "kernel=gaussian\nboundary=reflection\nbandwidth=" << format_double(bandwidth)
       << "\nbandwidth_rule=" << (silverman ? "silverman" : "explicit")
       << "\nsamples=" << samples << "\ngrid_points=" << grid_points
       << "\nmean=" << format_double(distribution.mean()) << '\n';
    return os.str();
  }
};

// Type-7 sample quantile of sorted data.
inline double sorted_quantile(const std::vector<double>& s, double p) {
  const double h = (s.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - lo) * (s[hi] - s[lo]);
}

// 0.9 min(sd, IQR / 1.34) n^{-1/5}; falls back to sd when the IQR is zero.
inline double silverman_bandwidth(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::sort(x.begin(), x.end());
  const double iqr = sorted_quantile(x, 0.75) - sorted_quantile(x, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Gaussian KDE of the given points on [0, 1] with reflection at both ends,
// integrated analytically onto a uniform grid of `grid_points` nodes.
inline KdeFit fit_kde(const std::vector<double>& x, std::optional<double> bandwidth = {},
                      int grid_points = 512) {
  if (x.size() < 2) throw DomainError("KDE fit needs at least 2 ratings");
  if (grid_points < 2) throw DomainError("KDE grid needs at least 2 points");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("KDE input must be normalized to [0, 1]");
  }
  KdeFit fit;
  fit.samples = x.size();
  fit.grid_points = grid_points;
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw DomainError("bandwidth must be > 0");
    fit.bandwidth = *bandwidth;
    fit.silverman = false;
  } else {
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
      throw DomainError(
          "all ratings are identical; the default bandwidth is zero, pass an "
          "explicit bandwidth");
    }
    fit.bandwidth = silverman_bandwidth(x);
  }
  const double h = fit.bandwidth;
  // Kernel mass on [0, r] from a point at x and its mirror images -x, 2-x.
  auto mass = [h](double xi, double r) {
    return (normal_cdf((r - xi) / h) - normal_cdf(-xi / h)) +
           (normal_cdf((r + xi) / h) - normal_cdf(xi / h)) +
           (normal_cdf((r - 2.0 + xi) / h) - normal_cdf((xi - 2.0) / h));
  };
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  std::vector<double> cdf(grid.size());
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = static_cast<double>(i) / (grid_points - 1);
  }
  double total = 0.0;
  for (double xi : x) total += mass(xi, 1.0);
  double run = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (double xi : x) s += mass(xi, grid[i]);
    run = std::max(run, std::clamp(s / total, 0.0, 1.0));
    cdf[i] = run;
  }
  grid.front() = 0.0;
  grid.back() = 1.0;
  cdf.front() = 0.0;
  cdf.back() = 1.0;
  fit.distribution = RewardDistribution::empirical(std::move(grid), std::move(cdf));
  return fit;
}

inline KdeFit fit_reward_cdf(const RatingsTable& table, std::optional<double> bandwidth = {},
                             int grid_points = 512) {
  if (table.size() < 2) throw DomainError("fitting needs at least 2 rated hotels");
  return fit_kde(table.normalized_ratings(), bandwidth, grid_points);
}

// Pooled within-hotel standard deviation on the normalized scale, weighting
// each hotel by n_reviews - 1 (equal weights when no counts are present).
inline double estimate_pref_sd(const RatingsTable& table) {
  double num = 0.0, den = 0.0, plain = 0.0;
  int count = 0;
  for (const auto& r : table.rows) {
    if (!r.rating_sd) continue;
    const double s = *r.rating_sd / r.scale_max;
    const double w = r.n_reviews > 1 ? static_cast<double>(r.n_reviews - 1) : 0.0;
    num += w * s * s;
    den += w;
    plain += s * s;
    ++count;
  }
  if (count < 10) {
    throw DomainError(
        "rating_sd is available for fewer than 10 hotels; supply pref_sd "
        "manually");
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(plain / count);
}

}  // namespace hill::ingest

#endif  // HILL_INGEST_HPP_
