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

#include "nbmine/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nbmine/baselines.hpp"
#include "nbmine/nb_mining.hpp"

namespace nbmine {

namespace {

// 2^24 subsets per pattern is far beyond any generated pattern size.
constexpr std::size_t kMaxClosurePatternSize = 24;

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

ScoringMode parse_scoring_mode(const std::string& name) {
  if (name == "closure") return ScoringMode::kSubsetClosure;
  if (name == "patterns") return ScoringMode::kPatternsOnly;
  throw std::invalid_argument("unknown scoring mode '" + name +
                              "' (expected closure or patterns)");
}

std::string to_string(ScoringMode mode) {
  return mode == ScoringMode::kSubsetClosure ? "closure" : "patterns";
}

ItemsetSet positives_closure(const GroundTruth& truth) {
  ItemsetSet out;
  std::vector<Item> sub;
  for (const auto& p : truth.patterns) {
    const auto& items = p.items.items();
    const std::size_t m = items.size();
    if (m < 2) continue;
    if (m > kMaxClosurePatternSize)
      throw std::invalid_argument("pattern too large for subset closure");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      if (std::popcount(mask) < 2) continue;
      sub.clear();
      for (std::size_t b = 0; b < m; ++b)
        if (mask >> b & 1u) sub.push_back(items[b]);
      out.insert(Itemset::from_sorted(sub));
    }
  }
  return out;
}

ItemsetSet positives(const GroundTruth& truth, ScoringMode mode) {
  if (mode == ScoringMode::kSubsetClosure) return positives_closure(truth);
  ItemsetSet out;
  for (const auto& p : truth.patterns)
    if (p.items.size() >= 2) out.insert(p.items);
  return out;
}

EvalReport score(const std::vector<Itemset>& mined,
                 const ItemsetSet& positives) {
  EvalReport r;
  r.positives_total = positives.size();
  ItemsetSet seen;
  for (const auto& s : mined) {
    if (s.size() < 2 || !seen.insert(s).second) continue;
    auto& bucket = r.by_size[s.size()];
    if (positives.contains(s)) {
      ++r.true_positives;
      ++bucket.tp;
    } else {
      ++r.false_positives;
      ++bucket.fp;
    }
  }
  const auto called = r.true_positives + r.false_positives;
  if (called > 0)
    r.precision = static_cast<double>(r.true_positives) / static_cast<double>(called);
  if (r.positives_total > 0)
    r.recall = static_cast<double>(r.true_positives) /
               static_cast<double>(r.positives_total);
  return r;
}

EvalReport score(const std::vector<Itemset>& mined, const GroundTruth& truth,
                 ScoringMode mode) {
  return score(mined, positives(truth, mode));
}

std::string SweepSpec::label() const {
  switch (method) {
    case Method::kNbFrequent: {
      std::ostringstream os;
      os << "nb-theta=" << theta;
      return os.str();
    }
    case Method::kMinSupport:
      return "min-support";
    case Method::kAllConfidence:
      return "all-confidence";
  }
  return "unknown";
}

std::vector<double> default_pi_grid() {
  return {0.999, 0.99, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
}

std::vector<double> default_support_grid() {
  return {0.01, 0.005, 0.004, 0.003, 0.002, 0.0015, 0.0013, 0.001, 0.0007, 0.0005};
}

std::vector<double> default_allconf_grid() {
  return {0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.04, 0.03, 0.02, 0.01};
}

namespace {

struct Job {
  const SweepSpec* spec;
  double parameter;
};

SweepEntry run_job(const TransactionDatabase& db, const ItemsetSet& pos,
                   const Job& job, const SweepOptions& options) {
  SweepEntry e;
  e.method = job.spec->label();
  e.parameter = job.parameter;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::vector<Itemset> mined;
    switch (job.spec->method) {
      case Method::kNbFrequent: {
        MinerConfig cfg;
        cfg.pi = job.parameter;
        cfg.theta = job.spec->theta;
        cfg.params = options.params;
        cfg.max_itemsets = options.max_itemsets;
        for (auto& m : nb_dfs(db, cfg).itemsets) mined.push_back(std::move(m.items));
        break;
      }
      case Method::kMinSupport:
      case Method::kAllConfidence: {
        LevelwiseLimits limits;
        limits.max_itemsets = options.max_itemsets;
        auto found = job.spec->method == Method::kMinSupport
                         ? mine_frequent(db, job.parameter, limits)
                         : mine_allconf(db, job.parameter, limits);
        for (auto& f : found)
          if (f.items.size() >= 2) mined.push_back(std::move(f.items));
        break;
      }
    }
    e.mined_count = mined.size();
    for (const auto& s : mined) e.max_size = std::max(e.max_size, s.size());
    e.report = score(mined, pos);
  } catch (const std::exception& ex) {
    e.error = ex.what();
  }
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

}  // namespace

SweepResult sweep(const TransactionDatabase& db, const GroundTruth& truth,
                  const std::vector<SweepSpec>& specs,
                  const SweepOptions& options) {
  const auto pos = positives(truth, options.mode);
  std::vector<Job> jobs;
  for (const auto& s : specs)
    for (double p : s.grid) jobs.push_back({&s, p});

  SweepResult result;
  result.entries.resize(jobs.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(jobs.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      result.entries[i] = run_job(db, pos, jobs[i], options);
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
        result.entries[i] = run_job(db, pos, jobs[i], options);
    });
  for (auto& t : pool) t.join();
  return result;
}

void write_sweep_table(const SweepResult& result, std::ostream& out) {
  out << "method\tparameter\tmined_count\tmax_size\ttp\tfp\tpositives_total\t"
         "precision\trecall\n";
  for (const auto& e : result.entries) {
    out << e.method << '\t' << format_number(e.parameter) << '\t';
    if (!e.report) {
      out << "NA\tNA\tNA\tNA\tNA\tNA\tNA\n";
      continue;
    }
    const auto& r = *e.report;
    out << e.mined_count << '\t' << e.max_size << '\t' << r.true_positives << '\t'
        << r.false_positives << '\t' << r.positives_total << '\t'
        << (r.precision ? format_number(*r.precision) : "NA") << '\t'
        << format_number(r.recall) << '\n';
  }
}

}  // namespace nbmine
