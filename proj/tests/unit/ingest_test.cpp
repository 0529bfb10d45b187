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
#include <sstream>
#include <vector>

#include "hill/ingest.hpp"
#include "hill/myopic.hpp"
#include "hill/rng.hpp"

namespace {

namespace ig = hill::ingest;

std::string synthetic_table(int rows) {
  std::ostringstream os;
  os << "hotel_id,avg_rating,rating_scale_max,n_reviews,rating_sd\n";
  for (int i = 0; i < rows; ++i) {
    // Bell-shaped scores around 4.9 / 10 from a fixed hash stream.
    const double z = hill::normal_from_unit(hill::bits_to_open_unit(hill::counter_hash(11, i, 0)),
                                            hill::bits_to_open_unit(hill::counter_hash(11, i, 1)));
    const double v = std::clamp(4.9 + 1.3 * z, 0.0, 10.0);
    os << "h" << i << ',' << v << ",10," << (10 + i % 7) << ',' << 0.5 + 0.1 * (i % 3) << '\n';
  }
  return os.str();
}

TEST(Load, NormalizesByScale) {
  std::istringstream in("hotel_id,avg_rating,rating_scale_max\na,10,10\nb,2.5,5\n");
  const auto t = ig::load_ratings(in);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.rows[0].normalized(), 1.0);
  EXPECT_EQ(t.rows[1].normalized(), 0.5);
}

TEST(Load, CountsRows) {
  std::istringstream in(synthetic_table(825));
  EXPECT_EQ(ig::load_ratings(in).size(), 825u);
}

TEST(Load, EmptyFileIsError) {
  std::istringstream a("");
  EXPECT_THROW(ig::load_ratings(a), hill::LoadError);
  std::istringstream b("hotel_id,avg_rating\n");
  EXPECT_THROW(ig::load_ratings(b), hill::LoadError);
}

TEST(Load, MissingColumnAndBadRowsReportLines) {
  std::istringstream a("id,score\nx,3\n");
  EXPECT_THROW(ig::load_ratings(a), hill::LoadError);
  std::istringstream b("hotel_id,avg_rating\nx,3\ny,oops\n");
  try {
    ig::load_ratings(b);
    FAIL();
  } catch (const hill::LoadError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream c("hotel_id,avg_rating\nx,3\ny,12\n");
  EXPECT_THROW(ig::load_ratings(c), hill::LoadError);
}

TEST(Load, CustomMappingAndQuotedFields) {
  ig::ColumnMapping m;
  m.hotel_id = "name";
  m.avg_rating = "score";
  m.scale_max = "";
  m.scale_max_value = 5.0;
  std::istringstream in("name,score\n\"Hotel, Plaka\",4\n");
  const auto t = ig::load_ratings(in, m);
  EXPECT_EQ(t.rows[0].hotel_id, "Hotel, Plaka");
  EXPECT_EQ(t.rows[0].normalized(), 0.8);
}

TEST(Fit, SymmetricPairHasMeanHalf) {
  const auto f = ig::fit_kde({0.3, 0.7});
  EXPECT_NEAR(f.distribution.mean(), 0.5, 1e-3);
}

TEST(Fit, CloseToEmpiricalCdf) {
  std::istringstream in(synthetic_table(825));
  const auto t = ig::load_ratings(in);
  const auto f = ig::fit_reward_cdf(t);
  auto x = t.normalized_ratings();
  std::sort(x.begin(), x.end());
  const double n = x.size();
  double ks = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = f.distribution.cdf(x[i]);
    ks = std::max({ks, std::abs((i + 1) / n - c), std::abs(c - i / n)});
  }
  EXPECT_LE(ks, 0.05);
}

TEST(Fit, MonotoneNormalizedAndDeterministic) {
  std::istringstream in(synthetic_table(300));
  const auto t = ig::load_ratings(in);
  const auto a = ig::fit_reward_cdf(t);
  const auto b = ig::fit_reward_cdf(t);
  const auto& e = std::get<hill::RewardDistribution::Empirical>(a.distribution.kind());
  EXPECT_EQ(e.cdf, std::get<hill::RewardDistribution::Empirical>(b.distribution.kind()).cdf);
  EXPECT_EQ(e.cdf.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(e.cdf.begin(), e.cdf.end()));
  const double tail = hill::integrate(
      a.distribution, [&](double r) { return 1 - a.distribution.cdf(r); }, 0, 1, {});
  EXPECT_NEAR(tail, a.distribution.mean(), 1e-8);
}

TEST(Fit, GridRefinementBarelyMovesWelfare) {
  std::istringstream in(synthetic_table(400));
  const auto t = ig::load_ratings(in);
  const auto a = ig::fit_reward_cdf(t, {}, 512);
  const auto b = ig::fit_reward_cdf(t, {}, 1024);
  const double va = hill::myopic::welfare_centralized(a.distribution, 20, 50).total_welfare;
  const double vb = hill::myopic::welfare_centralized(b.distribution, 20, 50).total_welfare;
  EXPECT_LT(std::abs(va - vb) / va, 1e-4);
}

TEST(Fit, DegenerateDataNeedsBandwidth) {
  EXPECT_THROW(ig::fit_kde({0.4, 0.4, 0.4}), hill::DomainError);
  EXPECT_NO_THROW(ig::fit_kde({0.4, 0.4, 0.4}, 0.05));
}

TEST(Fit, SilvermanRule) {
  const std::vector<double> x{0.1, 0.2, 0.4, 0.5, 0.9};
  const double m = 0.42;
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / 4);
  const double iqr = 0.5 - 0.2;
  EXPECT_NEAR(ig::silverman_bandwidth(x), 0.9 * std::min(sd, iqr / 1.34) * std::pow(5, -0.2),
              1e-15);
}

ig::RatingsTable sd_table(const std::vector<std::pair<long, double>>& rows, double scale) {
  ig::RatingsTable t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ig::RatingRow r;
    r.hotel_id = "h" + std::to_string(i);
    r.avg_rating = scale / 2;
    r.scale_max = scale;
    r.n_reviews = rows[i].first;
    r.rating_sd = rows[i].second;
    t.rows.push_back(r);
  }
  return t;
}

TEST(PrefSd, ZeroAndConstant) {
  EXPECT_EQ(ig::estimate_pref_sd(sd_table(std::vector<std::pair<long, double>>(12, {5, 0.0}), 1)),
            0.0);
  EXPECT_NEAR(
      ig::estimate_pref_sd(sd_table(std::vector<std::pair<long, double>>(12, {9, 1.0}), 10)), 0.1,
      1e-15);
}

TEST(PrefSd, PooledFormula) {
  std::vector<std::pair<long, double>> rows;
  double num = 0, den = 0;
  for (int i = 0; i < 15; ++i) {
    const long n = 2 + 3 * i;
    const double s = 0.4 + 0.13 * i;
    rows.push_back({n, s});
    num += (n - 1) * (s / 10) * (s / 10);
    den += n - 1;
  }
  EXPECT_NEAR(ig::estimate_pref_sd(sd_table(rows, 10)), std::sqrt(num / den), 1e-9);
}

TEST(PrefSd, NeedsTenHotels) {
  EXPECT_THROW(ig::estimate_pref_sd(sd_table(std::vector<std::pair<long, double>>(9, {5, 1}), 10)),
               hill::DomainError);
  std::istringstream in("hotel_id,avg_rating\na,3\nb,4\n");
  EXPECT_THROW(ig::estimate_pref_sd(ig::load_ratings(in)), hill::DomainError);
}

}  // namespace
