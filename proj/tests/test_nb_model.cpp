// Copyright 2026 The nbmine Authors
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


#include <cfloat>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nbmine/error.hpp"
#include "nbmine/nb_model.hpp"
#include "oracles.hpp"

using namespace nbmine;
using doctest::Approx;

namespace {

double rel_err(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

FreqHistogram hist_of(std::initializer_list<std::pair<const std::uint64_t, std::uint64_t>> c) {
  return FreqHistogram{std::map<std::uint64_t, std::uint64_t>(c)};
}

// Gamma-mixed Poisson counts for n items, zeros included.
std::vector<std::uint64_t> gamma_poisson(std::mt19937_64& rng, double k, double a,
                                         std::size_t n) {
  std::gamma_distribution<double> rate(k, a);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::poisson_distribution<std::uint64_t>(rate(rng))(rng));
  return out;
}

FreqHistogram histogram(const std::vector<std::uint64_t>& counts) {
  FreqHistogram h;
  for (auto c : counts)
    if (c > 0) ++h.counts[c];
  return h;
}

}  // namespace

TEST_CASE("pmf special cases") {
  CHECK(nb_pmf(1, 1, 0) == Approx(0.5));
  CHECK(nb_pmf(1, 1, 1) == Approx(0.25));
  CHECK(rel_err(nb_pmf(0.844, 118.141, 0), std::pow(119.141, -0.844)) < 1e-13);
  auto p = nb_pmf_prefix(1, 1, 3);
  REQUIRE(p.size() == 4);
  CHECK(p[0] == Approx(0.5));
  CHECK(p[1] == Approx(0.25));
  CHECK(p[2] == Approx(0.125));
  CHECK(p[3] == Approx(0.0625));
  CHECK_THROWS_AS(nb_pmf(0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(nb_pmf(1, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(nb_pmf_prefix(1, 0, 3), std::invalid_argument);
}

TEST_CASE("pmf against high-precision reference values") {
  // 40-digit evaluations of the closed form
  struct Ref {
    double k, a;
    std::uint64_t r;
    double p;
  };
  const Ref refs[] = {
      {0.844, 118.141, 0, 0.017693115501006555004},
      {0.844, 118.141, 1, 0.014807650686945103307},
      {0.844, 118.141, 100, 0.0033183343993125989961},
      {0.844, 1.164, 11, 0.00034763879032844101948},
      {0.05, 900.0, 5000, 4.3397492845052788056e-8},
  };
  for (const auto& ref : refs) {
    CAPTURE(ref.r);
    CHECK(rel_err(nb_pmf(ref.k, ref.a, ref.r), ref.p) < 1e-11);
    CHECK(rel_err(nb_pmf_prefix(ref.k, ref.a, ref.r).back(), ref.p) < 1e-9);
  }
  // 5.0e-577 is far below the double range
  CHECK(nb_pmf(2.5, 7.0, 10000) == 0.0);
  CHECK(nb_log_pmf(2.5, 7.0, 10000) == Approx(std::log(5.0032301464202594718) - 577 * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("prefix recursion agrees with direct evaluation") {
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> uk(0.01, 10.0), ua(0.01, 1000.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double k = uk(rng), a = ua(rng);
    auto prefix = nb_pmf_prefix(k, a, 10000);
    double worst = 0.0, sum = 0.0, prev_sum = 0.0;
    for (std::uint64_t r = 0; r <= 10000; ++r) {
      const double d = oracle::direct_pmf(k, a, r);
      if (d >= DBL_MIN) worst = std::max(worst, rel_err(prefix[r], d));
      sum += prefix[r];
      CHECK(sum >= prev_sum);
      prev_sum = sum;
    }
    CAPTURE(k);
    CAPTURE(a);
    CHECK(worst <= 1e-9);
    CHECK(sum <= 1 + 1e-12);
  }
}

TEST_CASE("numerical mean equals a*k") {
  for (auto [k, a] : {std::pair{1.0, 1.0}, {0.844, 1.164}, {2.5, 7.0}, {0.3, 20.0}}) {
    auto p = nb_pmf_prefix(k, a, 20000);
    double mean = 0.0;
    for (std::size_t r = 0; r < p.size(); ++r) mean += static_cast<double>(r) * p[r];
    CHECK(rel_err(mean, a * k) < 1e-6);
  }
}

TEST_CASE("tail") {
  CHECK(nb_tail(1, 1, 0) == 1.0);
  CHECK(nb_tail(1, 1, 2) == Approx(0.25));
  auto table = nb_tail_table(0.844, 1.164, 18);
  REQUIRE(table.size() == 20);
  CHECK(table[0] == 1.0);
  for (std::size_t r = 1; r < table.size(); ++r) {
    CHECK(table[r] <= table[r - 1]);
    CHECK(table[r] == Approx(nb_tail(0.844, 1.164, r)).epsilon(1e-12));
  }
  // reference 0.2515087857; the published table's e column sums to 0.25136
  const double e11 = 339 * nb_tail(0.844, 1.164, 11);
  CHECK(e11 == Approx(0.2515087857).epsilon(1e-8));
  CHECK(std::abs(e11 - 0.25136) < 5e-4);
}

TEST_CASE("method of moments") {
  auto webview = fit_moments(99.711, 11879.543);
  CHECK(std::abs(webview.k - 0.844) <= 0.001);
  CHECK(std::abs(webview.a - 118.14) <= 0.05);

  auto geo = fit_moments(7.0, 14.0);
  CHECK(geo.k == Approx(7.0));
  CHECK(geo.a == Approx(1.0));

  CHECK_THROWS_AS(fit_moments(5.0, 5.0), UnderdispersionError);
  CHECK_THROWS_AS(fit_moments(5.0, 4.0), UnderdispersionError);

  for (auto [k, a] : {std::pair{0.844, 118.141}, {3.0, 0.5}, {0.01, 999.0}}) {
    auto back = fit_moments(a * k, a * k * (1 + a));
    CHECK(back.k == Approx(k).epsilon(1e-12));
    CHECK(back.a == Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("histogram moments use the unbiased variance") {
  // values 0,0,1,1,1,4
  auto m = histogram_moments(hist_of({{1, 3}, {4, 1}}), 2);
  CHECK(m.mean == Approx(7.0 / 6.0));
  const double ss = 2 * (7.0 / 6) * (7.0 / 6) + 3 * (1 / 6.0) * (1 / 6.0) +
                    (17.0 / 6) * (17.0 / 6);
  CHECK(m.variance == Approx(ss / 5));
}

TEST_CASE("trimming") {
  auto h = hist_of({{1, 100}, {2, 50}, {7, 3}});
  auto same = trim_top(h, 0.0);
  CHECK(same.trimmed == 0);
  CHECK(same.hist.counts == h.counts);

  FreqHistogram h342 = hist_of({{1, 300}, {5, 30}, {40, 6}, {90, 4}, {300, 2}});
  REQUIRE(h342.observed_items() == 342);
  auto t = trim_top(h342, 0.025);
  CHECK(t.trimmed == 9);
  CHECK(t.hist.counts == std::map<std::uint64_t, std::uint64_t>{{1, 300}, {5, 30}, {40, 3}});

  auto one = trim_top(hist_of({{1, 10}}), 0.05);
  CHECK(one.trimmed == 1);
  CHECK(one.hist.counts == std::map<std::uint64_t, std::uint64_t>{{1, 9}});

  CHECK_THROWS_AS(trim_top(h, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(trim_top(h, -0.1), std::invalid_argument);
}

TEST_CASE("EM with a known item count is one moments pass") {
  auto h = hist_of({{1, 40}, {2, 20}, {3, 9}, {5, 6}, {9, 3}, {20, 1}});
  const auto observed = h.observed_items();
  auto p = fit_em(h, observed);
  auto direct = fit_moments(histogram_moments(h).mean, histogram_moments(h).variance);
  CHECK(p.em_iterations == 0);
  CHECK(p.n_total == observed);
  CHECK(p.k == Approx(direct.k));
  CHECK(p.a == Approx(direct.a));

  auto q = fit_em(h, observed + 25);
  auto m = histogram_moments(h, 25);
  auto aug = fit_moments(m.mean, m.variance);
  CHECK(q.n_total == observed + 25);
  CHECK(q.k == Approx(aug.k));
  CHECK(q.a == Approx(aug.a));
  CHECK(q.incidence_total == h.incidences());

  CHECK_THROWS_AS(fit_em(h, observed - 1), std::invalid_argument);
  CHECK_THROWS_AS(fit_em(hist_of({{3, 10}})), std::invalid_argument);
}

TEST_CASE("EM recovers the generating shape") {
  std::mt19937_64 rng(7);
  auto counts = gamma_poisson(rng, 1.0, 100.0, 1000);
  auto h = histogram(counts);
  auto p = fit_em(h);
  CHECK(std::abs(p.k - 1.0) <= 0.15);
  CHECK(p.em_iterations >= 1);
  CHECK(p.n_total >= h.observed_items());
  // fixed point: the zero-class is the model's expectation of zeros
  const double z = p.n_total - static_cast<double>(h.observed_items());
  CHECK(std::abs(z - p.n_total * nb_pmf(p.k, p.a, 0)) < 1.0);
}

TEST_CASE("EM rejects underdispersed data") {
  // nearly constant counts
  CHECK_THROWS_AS(fit_em(hist_of({{10, 50}, {11, 50}})), UnderdispersionError);
}

TEST_CASE("per-incidence rescaling") {
  NBParams p;
  p.k = 1;
  p.a = 100;
  p.incidence_total = 100;
  CHECK(rescale_per_incidence(p) == 1.0);
  p.incidence_total = 200;
  CHECK(rescale_per_incidence(p) == 0.5);
  p.incidence_total = 0;
  CHECK_THROWS_AS(rescale_per_incidence(p), std::invalid_argument);
  CHECK(rescale_for_itemset(0.25, 0) == 0.0);
  CHECK(rescale_for_itemset(0.25, 599) == Approx(149.75));
}

TEST_CASE("goodness of fit") {
  NBParams p;
  p.k = 1;
  p.a = 50;
  p.n_total = 500;
  SUBCASE("exact expectations give chi2 = 0") {
    auto pmf = nb_pmf_prefix(p.k, p.a, 4000);
    std::vector<double> obs;
    for (double x : pmf) obs.push_back(p.n_total * x);
    auto g = gof_chi2(obs, p);
    CHECK(g.chi2 < 1e-9);
    CHECK(g.p_value == Approx(1.0));
    CHECK(g.df == static_cast<int>(g.classes.size()) - 3);
  }
  SUBCASE("merged classes meet the minimum expectation") {
    for (double a : {0.5, 3.0, 50.0, 500.0}) {
      NBParams q = p;
      q.a = a;
      q.n_total = 2000;
      std::vector<double> obs(10, 1.0);
      auto g = gof_chi2(obs, q);
      double total = 0.0;
      for (std::size_t i = 0; i < g.classes.size(); ++i) {
        CHECK(g.classes[i].expected >= 5.0);
        if (i + 1 < g.classes.size()) {
          REQUIRE(g.classes[i].r_hi.has_value());
          CHECK(g.classes[i + 1].r_lo == *g.classes[i].r_hi + 1);
        }
        total += g.classes[i].expected;
      }
      CHECK(!g.classes.back().r_hi.has_value());
      CHECK(total == Approx(2000.0));
    }
  }
  SUBCASE("too few classes") {
    NBParams tiny = p;
    tiny.n_total = 12;
    CHECK_THROWS_AS(gof_chi2(std::vector<double>{12}, tiny), Error);
  }
  SUBCASE("simulated null data rarely rejects") {
    std::mt19937_64 rng(42);
    int accepted = 0;
    for (int run = 0; run < 100; ++run) {
      auto counts = gamma_poisson(rng, 1.0, 50.0, 500);
      auto g = gof_chi2(histogram(counts), p);
      if (g.p_value > 0.01) ++accepted;
    }
    CHECK(accepted >= 95);
  }
}

TEST_CASE("chi-square survival") {
  CHECK(chi2_survival(0.0, 3) == 1.0);
  // closed form for 2 degrees of freedom
  CHECK(chi2_survival(4.0, 2) == Approx(std::exp(-2.0)));
  CHECK(chi2_survival(3.84145882069412, 1) == Approx(0.05).epsilon(1e-9));
}

TEST_CASE("expected frequent items") {
  NBParams p;
  p.k = 1;
  p.a = 1;
  p.n_total = 100;
  CHECK(expected_frequent_items(p, 0) == Approx(100));
  CHECK(expected_frequent_items(p, 2) == Approx(25));
  double prev = 100;
  for (std::uint64_t s = 1; s < 40; ++s) {
    CHECK(expected_frequent_items(p, s) <= prev);
    prev = expected_frequent_items(p, s);
  }
}

TEST_CASE("fit_database") {
  std::vector<std::vector<Item>> baskets;
  std::mt19937_64 rng(3);
  auto counts = gamma_poisson(rng, 0.8, 30.0, 200);
  // spread each item's occurrences over 400 transactions
  baskets.resize(400);
  for (Item i = 0; i < counts.size(); ++i)
    for (std::uint64_t c = 0; c < std::min<std::uint64_t>(counts[i], 400); ++c)
      baskets[(i * 7 + c * 13) % 400].push_back(i);
  for (auto& b : baskets)
    if (b.empty()) b.push_back(0);
  auto db = TransactionDatabase::from_baskets(baskets);

  auto fit = fit_database(db, {.trim_fraction = 0.025});
  CHECK(fit.params.incidence_total == db.incidence_total());
  CHECK(fit.params.transaction_count == 400);
  CHECK(fit.params.trimmed_items == static_cast<std::uint64_t>(std::ceil(0.025 * db.item_count())));
  CHECK(fit.params.a_per_incidence == Approx(fit.params.a / db.incidence_total()));
  CHECK(fit.histogram.observed_items() == db.item_count() - fit.params.trimmed_items);

  auto known = fit_database(db, {.total_items = 200});
  CHECK(known.params.n_total == 200);
  CHECK(known.params.em_iterations == 0);
}

TEST_CASE("model files round-trip") {
  NBParams p{0.84401, 118.14123456789, 118.14123456789 / 33802, 339, 33802, 20000, 3, 9};
  std::stringstream s;
  write_model(p, s);
  CHECK(read_model(s) == p);

  std::istringstream missing("k = 1\na = 2\n");
  CHECK_THROWS_AS(read_model(missing), ParseError);
  std::istringstream bad("k = x\n");
  CHECK_THROWS_AS(read_model(bad), ParseError);
}
