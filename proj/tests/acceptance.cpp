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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nbmine/nbmine.hpp"
#include "oracles.hpp"

using namespace nbmine;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs) {
  std::printf("%s  %2d  %-34s %9.3f s  %s\n", o.pass ? "PASS" : "FAIL", id,
              name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// Runs `body`, timing it, and fails the criterion past `limit` seconds.
void run(int id, const std::string& name, double limit,
         const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = seconds_since(start);
  if (limit > 0 && secs >= limit) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(limit) + " s budget)";
  }
  report(id, name, o, secs);
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

bool subset(const std::set<Itemset>& a, const std::set<Itemset>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ---- shared random-database runs (criteria 4, 6, 10) ----

struct RandomRun {
  double pi, theta;
  std::set<Itemset> mined;
  MiningResult result;
};

struct RandomCase {
  oracle::Baskets baskets;
  TransactionDatabase db;
  NBParams params;
  std::vector<RandomRun> runs;
};

const double kPis[] = {0.5, 0.9, 0.99};
const double kThetas[] = {0.0, 0.5, 1.0};

std::vector<RandomCase> random_cases() {
  std::vector<RandomCase> cases;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomCase c;
    c.baskets = oracle::random_baskets(seed);
    c.db = TransactionDatabase::from_baskets(c.baskets);
    c.params = oracle::params_for(c.baskets, static_cast<unsigned>(c.db.item_count()) + 2,
                                  oracle::shape_for(seed));
    cases.push_back(std::move(c));
  }
  return cases;
}

Outcome miner_oracle(std::vector<RandomCase>& cases) {
  std::size_t runs = 0, mismatches = 0, emitted = 0;
  for (auto& c : cases) {
    for (double pi : kPis) {
      for (double theta : kThetas) {
        MinerConfig cfg;
        cfg.params = c.params;
        cfg.pi = pi;
        cfg.theta = theta;
        RandomRun r{pi, theta, {}, nb_dfs(c.db, cfg)};
        for (const auto& m : r.result.itemsets) r.mined.insert(m.items);
        if (r.mined != oracle::nb_frequent(c.baskets, c.params, pi, theta)) ++mismatches;
        emitted += r.mined.size();
        ++runs;
        c.runs.push_back(std::move(r));
      }
    }
  }
  return {mismatches == 0, std::to_string(runs) + " runs, " + std::to_string(mismatches) +
                               " mismatches, " + std::to_string(emitted) + " itemsets"};
}

Outcome confidence_equivalence(const std::vector<RandomCase>& cases) {
  std::size_t checked = 0, bad = 0;
  for (const auto& c : cases) {
    const double n = static_cast<double>(c.baskets.size());
    for (const auto& r : c.runs) {
      // admission sets per expanded itemset
      std::map<Itemset, std::set<Item>> by_conf;
      for (const auto& lt : r.result.thresholds) {
        if (!lt.sigma_freq) continue;
        const double supp_l = static_cast<double>(lt.base_freq) / n;
        const double min_conf = (static_cast<double>(*lt.sigma_freq) / n) / supp_l;
        std::set<Item> freq_set, conf_set;
        for (auto [item, f] : c.db.item_freq()) {
          if (lt.base.contains(item)) continue;
          const auto joint = oracle::count_containing(c.baskets, lt.base.with(item));
          if (joint == 0) continue;
          if (joint >= *lt.sigma_freq) freq_set.insert(item);
          if ((static_cast<double>(joint) / n) / supp_l >= min_conf) conf_set.insert(item);
        }
        if (freq_set != conf_set) ++bad;
        by_conf[lt.base] = std::move(conf_set);
      }
      // every emitted itemset is admitted by some subset's confidence bar
      for (const auto& z : r.mined) {
        bool admitted = false;
        for (Item c_item : z) {
          auto it = by_conf.find(z.without(c_item));
          if (it != by_conf.end() && it->second.count(c_item)) admitted = true;
        }
        if (!admitted) ++bad;
        ++checked;
      }
    }
  }
  return {bad == 0 && checked > 0,
          std::to_string(checked) + " emitted itemsets, " + std::to_string(bad) + " violations"};
}

Outcome monotonicity(const std::vector<RandomCase>& cases) {
  std::size_t bad = 0;
  for (const auto& c : cases) {
    std::map<std::pair<double, double>, const std::set<Itemset>*> out;
    for (const auto& r : c.runs) out[{r.pi, r.theta}] = &r.mined;
    for (double theta : kThetas) {
      bad += !subset(*out[{0.99, theta}], *out[{0.9, theta}]);
      bad += !subset(*out[{0.9, theta}], *out[{0.5, theta}]);
    }
    for (double pi : kPis) {
      bad += !subset(*out[{pi, 1.0}], *out[{pi, 0.5}]);
      bad += !subset(*out[{pi, 0.5}], *out[{pi, 0.0}]);
    }
  }
  return {bad == 0, std::to_string(cases.size()) + " databases, " + std::to_string(bad) +
                        " violated inclusions"};
}

Outcome baseline_oracles(const std::vector<RandomCase>& cases) {
  std::size_t bad = 0, runs = 0;
  for (const auto& c : cases) {
    for (double sigma : {0.05, 0.1, 0.2, 0.4}) {
      std::map<Itemset, std::uint64_t> got;
      for (const auto& f : mine_frequent(c.db, sigma)) got[f.items] = f.freq;
      bad += got != oracle::exhaustive_frequent(c.baskets, sigma);
      ++runs;
    }
    for (double gamma : {0.05, 0.2, 0.5, 0.8, 1.0}) {
      std::set<Itemset> got;
      for (const auto& f : mine_allconf(c.db, gamma)) got.insert(f.items);
      bad += got != oracle::exhaustive_allconf(c.baskets, gamma);
      ++runs;
    }
  }
  return {bad == 0, std::to_string(runs) + " runs, " + std::to_string(bad) + " mismatches"};
}

// ---- generated-data runs (criteria 7, 8, 9) ----

struct Artif2Run {
  GeneratedData data;
  NBParams params;
  MiningResult mined;
  EvalReport report;
};

Artif2Run artif2_run() {
  auto cfg = GenConfig::preset("artif-2");
  cfg.n_transactions = 20000;
  Artif2Run r{generate(cfg), {}, {}, {}};
  r.params = fit_database(r.data.db).params;
  MinerConfig mc;
  mc.params = r.params;
  mc.pi = 0.95;
  mc.theta = 0.5;
  r.mined = nb_dfs(r.data.db, mc);
  std::vector<Itemset> sets;
  for (const auto& m : r.mined.itemsets) sets.push_back(m.items);
  r.report = score(sets, r.data.truth);
  return r;
}

Outcome dominance(const Artif2Run& run) {
  SweepOptions opt;
  opt.params = run.params;
  opt.max_itemsets = 5000000;
  auto res = sweep(run.data.db, run.data.truth,
                   {{Method::kNbFrequent, 0.5, default_pi_grid()},
                    {Method::kMinSupport, 0.0, default_support_grid()}},
                   opt);
  auto best = [&](const std::string& method, double recall) -> std::optional<double> {
    std::optional<double> b;
    for (const auto& e : res.entries) {
      if (e.method != method || !e.report || !e.report->precision) continue;
      if (e.report->recall < recall) continue;
      b = std::max(b.value_or(0.0), *e.report->precision);
    }
    return b;
  };
  int ok = 0;
  std::string detail;
  for (double level : {0.2, 0.3, 0.4}) {
    auto nb = best("nb-theta=0.5", level);
    auto sup = best("min-support", level);
    const bool pass = nb && (!sup || *nb >= *sup);
    ok += pass;
    detail += "R>=" + fmt(level, 2) + ": nb " + (nb ? fmt(*nb, 4) : "none") + " vs support " +
              (sup ? fmt(*sup, 4) : "none") + (pass ? "; " : " (lost); ");
  }
  return {ok == 3, detail};
}

Outcome threshold_decrease(const Artif2Run& run) {
  std::map<std::size_t, std::vector<double>> by_size;
  const double n = static_cast<double>(run.data.db.transaction_count());
  for (const auto& m : run.mined.itemsets)
    by_size[m.items.size()].push_back(static_cast<double>(m.sigma_freq) / n);
  if (by_size.empty()) return {false, "nothing mined"};
  std::string detail = "medians:";
  double prev = INFINITY;
  bool ok = true;
  for (auto& [size, v] : by_size) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    const double med = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    ok = ok && med <= prev;
    prev = med;
    detail += " " + std::to_string(size) + ":" + fmt(med, 4);
  }
  return {ok, detail};
}

// ---- generator and scaling (criteria 11, 12) ----

Outcome generator_sanity() {
  auto cfg = GenConfig::preset("artif-1");
  cfg.n_transactions = 20000;
  auto a = generate(cfg);
  auto b = generate(cfg);
  const double mean = static_cast<double>(a.db.incidence_total()) /
                      static_cast<double>(a.db.transaction_count());
  bool same = a.db.baskets() == b.db.baskets() &&
              a.truth.patterns.size() == b.truth.patterns.size();
  for (std::size_t i = 0; same && i < a.truth.patterns.size(); ++i)
    same = a.truth.patterns[i].items == b.truth.patterns[i].items &&
           a.truth.patterns[i].weight == b.truth.patterns[i].weight;
  return {std::abs(mean - 10.0) <= 0.5 && same,
          "mean size " + fmt(mean, 5) + ", " + std::to_string(a.db.item_count()) +
              " distinct items, identical reruns: " + (same ? "yes" : "no")};
}

Outcome linear_scaling() {
  auto cfg = GenConfig::preset("artif-2");
  cfg.n_transactions = 20000;
  cfg.seed = 2;
  const auto data = generate(cfg);
  std::vector<double> xs, ys;
  std::string detail;
  for (std::size_t n : {5000, 10000, 20000}) {
    auto sample = data.db.head(n);
    MinerConfig mc;
    mc.params = fit_database(sample).params;
    mc.pi = 0.95;
    mc.theta = 0.5;
    double best = INFINITY;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = Clock::now();
      nb_dfs(sample, mc);
      best = std::min(best, seconds_since(start));
    }
    xs.push_back(static_cast<double>(n));
    ys.push_back(best);
    detail += std::to_string(n) + ":" + fmt(best, 3) + "s ";
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 0.0;
  return {r2 >= 0.9, detail + "R^2 " + fmt(r2, 4)};
}

}  // namespace

int main() {
  std::printf("nbmine %s acceptance\n", kVersion);

  run(1, "worked-example threshold", 1e-3, [] {
    const FreqHistogram hist{{{1, 81}, {2, 48}, {3, 13}, {4, 6}, {6, 1}, {8, 1},
                              {11, 2}, {12, 1}, {13, 1}, {14, 1}, {18, 1}}};
    const double p10 = predicted_precision(hist, 339, 0.844, 1.164, 10);
    const double p11 = predicted_precision(hist, 339, 0.844, 1.164, 11);
    const auto sigma = find_threshold(hist, 339, 0.844, 1.164, 0.95);
    const bool ok = std::abs(p10 - 0.92108) <= 5e-5 && std::abs(p11 - 0.95811) <= 5e-5 &&
                    sigma == 11u;
    return Outcome{ok, "precision(10)=" + fmt(p10) + " precision(11)=" + fmt(p11) +
                           " threshold=" + (sigma ? std::to_string(*sigma) : "none")};
  });

  run(2, "moments round-trip", 1e-3, [] {
    auto ka = fit_moments(99.711, 11879.543);
    return Outcome{std::abs(ka.k - 0.844) <= 0.001 && std::abs(ka.a - 118.14) <= 0.05,
                   "k=" + fmt(ka.k) + " a=" + fmt(ka.a)};
  });

  run(3, "pmf recursion vs direct", 5.0, [] {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uk(0.01, 10.0), ua(0.01, 1000.0);
    double worst = 0.0;
    std::size_t compared = 0, underflow_mismatch = 0;
    for (int i = 0; i < 200; ++i) {
      const double k = uk(rng), a = ua(rng);
      const auto prefix = nb_pmf_prefix(k, a, 10000);
      for (std::uint64_t r = 0; r <= 10000; ++r) {
        const double d = nb_pmf(k, a, r);
        if (d >= DBL_MIN) {
          worst = std::max(worst, std::abs(prefix[r] - d) / d);
          ++compared;
        } else if (prefix[r] >= DBL_MIN) {
          ++underflow_mismatch;
        }
      }
    }
    return Outcome{worst <= 1e-9 && underflow_mismatch == 0,
                   "max rel. deviation " + fmt(worst, 3) + " over " + std::to_string(compared) +
                       " normal values"};
  });

  auto cases = random_cases();
  run(4, "miner vs brute-force definition", 60.0, [&] { return miner_oracle(cases); });
  run(5, "baseline miners vs enumeration", 60.0, [&] { return baseline_oracles(cases); });
  run(6, "frequency/confidence admission", 0, [&] { return confidence_equivalence(cases); });

  std::optional<Artif2Run> artif2;
  run(7, "predicted vs actual precision", 120.0, [&] {
    artif2 = artif2_run();
    const double p = artif2->report.precision.value_or(0.0);
    return Outcome{p >= 0.88 && p <= 1.0,
                   "precision " + fmt(p, 5) + ", recall " + fmt(artif2->report.recall, 4) +
                       ", " + std::to_string(artif2->mined.itemsets.size()) + " itemsets"};
  });
  run(8, "dominance over minimum support", 0, [&] {
    return artif2 ? dominance(*artif2) : Outcome{false, "criterion 7 run unavailable"};
  });
  run(9, "threshold falls with size", 0, [&] {
    return artif2 ? threshold_decrease(*artif2) : Outcome{false, "criterion 7 run unavailable"};
  });
  run(10, "pi and theta monotonicity", 0, [&] { return monotonicity(cases); });
  run(11, "generator sanity", 30.0, generator_sanity);
  run(12, "linear scaling", 0, linear_scaling);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
