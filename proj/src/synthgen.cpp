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

#include "nbmine/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nbmine/error.hpp"

namespace nbmine {

namespace {

// Poisson inversion is done in chunks of at most this mean so that
// exp(-mean) stays well inside the normal double range.
constexpr double kPoissonChunk = 500.0;

// Pattern draws that add nothing new (fully corrupted, or already in the
// basket) tolerated before a transaction is closed as is.
constexpr int kMaxStalledDraws = 1000;

}  // namespace

void GenConfig::validate() const {
  if (n_transactions == 0 || n_items == 0 || n_patterns == 0)
    throw std::invalid_argument("generator counts must be positive");
  if (!(avg_transaction_size > 0.0) || !(avg_pattern_size > 0.0))
    throw std::invalid_argument("average sizes must be positive");
  if (avg_pattern_size > static_cast<double>(n_items))
    throw std::invalid_argument(
        "average pattern size exceeds the number of items");
  if (!(correlation >= 0.0 && correlation <= 1.0))
    throw std::invalid_argument("correlation must be in [0, 1]");
  if (!(corruption >= 0.0 && corruption <= 1.0))
    throw std::invalid_argument("corruption must be in [0, 1]");
}

GenConfig GenConfig::preset(const std::string& name) {
  GenConfig c;
  c.n_transactions = 100000;
  c.avg_transaction_size = 10.0;
  c.n_items = 1000;
  c.correlation = 0.5;
  c.corruption = 0.5;
  if (name == "artif-1") {
    c.n_patterns = 2000;
    c.avg_pattern_size = 4.0;
  } else if (name == "artif-2") {
    c.n_patterns = 4000;
    c.avg_pattern_size = 2.0;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return c;
}

double SeededDraws::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededDraws::below(std::uint64_t n) {
  auto v = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return std::min(v, n - 1);
}

double SeededDraws::exponential(double mean) {
  return -mean * std::log1p(-uniform());
}

std::uint64_t SeededDraws::poisson(double mean) {
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double lambda = std::min(mean, kPoissonChunk);
    mean -= lambda;
    const double u = uniform();
    double p = std::exp(-lambda);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && p > 0.0) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

namespace {

std::vector<Pattern> make_patterns(const GenConfig& cfg, SeededDraws& rng) {
  std::vector<Pattern> patterns;
  patterns.reserve(cfg.n_patterns);
  std::vector<Item> prev;
  double weight_sum = 0.0;
  for (std::uint64_t p = 0; p < cfg.n_patterns; ++p) {
    auto size = std::max<std::uint64_t>(1, rng.poisson(cfg.avg_pattern_size));
    size = std::min<std::uint64_t>(size, cfg.n_items);

    std::vector<Item> items;
    items.reserve(size);
    if (p > 0) {
      const double frac = std::min(1.0, rng.exponential(cfg.correlation));
      auto reuse = static_cast<std::uint64_t>(
          std::floor(frac * static_cast<double>(size) + 0.5));
      reuse = std::min<std::uint64_t>(reuse, prev.size());
      std::vector<Item> pool = prev;
      for (std::uint64_t i = 0; i < reuse; ++i) {
        auto j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
        items.push_back(pool[i]);
      }
    }
    while (items.size() < size) {
      auto item = static_cast<Item>(rng.below(cfg.n_items));
      if (std::find(items.begin(), items.end(), item) == items.end())
        items.push_back(item);
    }
    prev = items;

    const double w = rng.exponential(1.0);
    weight_sum += w;
    patterns.push_back({Itemset(std::move(items)), w});
  }
  for (auto& p : patterns) p.weight /= weight_sum;
  return patterns;
}

}  // namespace

GeneratedData generate(const GenConfig& config) {
  config.validate();
  SeededDraws rng(config.seed);
  GeneratedData out;
  out.truth.patterns = make_patterns(config, rng);
  const auto& patterns = out.truth.patterns;

  std::vector<double> cumulative;
  cumulative.reserve(patterns.size());
  double acc = 0.0;
  for (const auto& p : patterns) cumulative.push_back(acc += p.weight);

  auto pick = [&]() -> const Pattern& {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return patterns[static_cast<std::size_t>(it - cumulative.begin())];
  };

  std::vector<std::vector<Item>> baskets;
  baskets.reserve(config.n_transactions);
  std::optional<std::vector<Item>> carry;
  std::vector<Item> basket;
  std::vector<Item> draw;

  auto add = [&](const std::vector<Item>& items) {
    for (Item i : items)
      if (std::find(basket.begin(), basket.end(), i) == basket.end())
        basket.push_back(i);
  };

  for (std::uint64_t t = 0; t < config.n_transactions; ++t) {
    const auto target = std::max<std::uint64_t>(
        1, rng.poisson(config.avg_transaction_size));
    basket.clear();
    if (carry) {
      add(*carry);
      carry.reset();
    }
    int stalled = 0;
    while (basket.size() < target) {
      const auto& pattern = pick();
      draw = pattern.items.items();
      while (!draw.empty() && rng.uniform() < config.corruption)
        draw.erase(draw.begin() + static_cast<std::ptrdiff_t>(rng.below(draw.size())));
      std::size_t fresh = 0;
      for (Item i : draw)
        if (std::find(basket.begin(), basket.end(), i) == basket.end()) ++fresh;
      if (fresh == 0) {
        if (++stalled >= kMaxStalledDraws) break;
        continue;
      }
      if (!basket.empty() && basket.size() + fresh > target) {
        if (rng.uniform() < 0.5)
          add(draw);
        else
          carry = draw;
        break;
      }
      add(draw);
    }
    baskets.push_back(basket);
  }
  out.db = TransactionDatabase::from_baskets(baskets);
  return out;
}

void write_truth(const GroundTruth& truth, std::ostream& out) {
  for (const auto& p : truth.patterns) {
    std::ostringstream w;
    w << std::setprecision(17) << p.weight;
    out << w.str() << '\t' << p.items.to_string() << '\n';
  }
}

void write_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write truth file " + path.string());
  write_truth(truth, out);
  if (!out) throw IoError("write failure on " + path.string());
}

GroundTruth read_truth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  double sum = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected 'weight<TAB>items'", line_no);
    Pattern p;
    try {
      std::size_t used = 0;
      p.weight = std::stod(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad pattern weight", line_no);
    }
    if (!(p.weight >= 0.0)) throw ParseError("negative pattern weight", line_no);
    std::istringstream ids(line.substr(tab + 1));
    std::vector<Item> items;
    std::string tok;
    while (ids >> tok) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok[0] == '-' || v > 0xFFFFFFFFull)
        throw ParseError("bad item id '" + tok + "'", line_no);
      items.push_back(static_cast<Item>(v));
    }
    if (items.empty()) throw ParseError("pattern without items", line_no);
    p.items = Itemset(std::move(items));
    sum += p.weight;
    truth.patterns.push_back(std::move(p));
  }
  if (sum > 0.0)
    for (auto& p : truth.patterns) p.weight /= sum;
  return truth;
}

GroundTruth read_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open truth file " + path.string());
  return read_truth(in);
}

}  // namespace nbmine
