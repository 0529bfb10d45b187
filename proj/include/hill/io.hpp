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

#ifndef HILL_IO_HPP_
#define HILL_IO_HPP_

// CSV and SVG writers for reports and simulation traces.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hill/distribution.hpp"
#include "hill/sim.hpp"

namespace hill::io {

struct WelfareRow {
  std::string label;
  double total_welfare = 0.0;
  int agents = 1;
  double exploration_slots = 0.0;
};

inline void write_welfare_csv(const std::vector<WelfareRow>& rows, std::ostream& out) {
  out << "label,total_welfare,per_agent,exploration_slots\n";
  for (const auto& r : rows) {
    out << r.label << ',' << format_double(r.total_welfare) << ','
        << format_double(r.total_welfare / r.agents) << ','
        << format_double(r.exploration_slots) << '\n';
  }
}

// Writes `# ` prefixed metadata lines, one per line of `meta`.
inline void write_comment_block(const std::string& meta, std::ostream& out) {
  std::istringstream in(meta);
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
}

inline void write_sim_csv(const sim::SimResult& r, const std::string& meta, std::ostream& out) {
  write_comment_block(meta, out);
  out << "t,mean_reward_per_agent,stderr\n";
  for (std::size_t t = 0; t < r.per_slot_mean_reward.size(); ++t) {
    out << t << ',' << format_double(r.per_slot_mean_reward[t]) << ','
        << format_double(r.per_slot_stderr[t]) << '\n';
  }
}

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal line chart: axes box, one polyline per series, a legend, and the
// data range printed on the axes.
inline void write_svg(const std::vector<Series>& series, const std::string& title,
                      std::ostream& out) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  const double w = 640, h = 400, ml = 60, mr = 20, mt = 40, mb = 40;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series) {
    for (double v : s.x) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
    for (double v : s.y) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (v - y0) / (y1 - y0) * (h - mt - mb); };
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << w - ml - mr
      << "\" height=\"" << h - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"" << h - 20 << "\" font-size=\"11\">" << num(x0)
      << "</text>\n";
  out << "<text x=\"" << w - mr - 30 << "\" y=\"" << h - 20 << "\" font-size=\"11\">"
      << num(x1) << "</text>\n";
  out << "<text x=\"4\" y=\"" << h - mb << "\" font-size=\"11\">" << num(y0) << "</text>\n";
  out << "<text x=\"4\" y=\"" << mt + 10 << "\" font-size=\"11\">" << num(y1) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      out << (k ? " " : "") << num(px(s.x[k])) << ',' << num(py(s.y[k]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << w - mr - 150 << "\" y=\"" << mt + 16 + 14 * i
        << "\" font-size=\"11\" fill=\"" << color << "\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace hill::io

#endif  // HILL_IO_HPP_
