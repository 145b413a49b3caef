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

#include "nbmine/baselines.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "nbmine/error.hpp"

namespace nbmine {

namespace {

using TidList = std::vector<std::uint32_t>;

struct Candidate {
  std::vector<std::uint32_t> items;  // dense indices, ascending
  TidList tids;
};

struct DenseHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

TidList intersect(const TidList& a, const TidList& b) {
  TidList out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

/// Level-wise search over a vertical (tid-list) layout. `keep` decides
/// membership of an itemset of size >= 2 given its frequency; `bound` is a
/// cheap necessary condition checked before the tid-list intersection.
/// Level 1 keeps the items `keep_item` admits. The constraint must be
/// downward closed over the kept levels.
class LevelwiseMiner {
 public:
  using ItemPredicate = std::function<bool(std::uint64_t freq)>;
  using SetPredicate = std::function<bool(
      const std::vector<std::uint32_t>& items, std::uint64_t freq)>;

  LevelwiseMiner(const TransactionDatabase& db, const LevelwiseLimits& limits)
      : db_(db), limits_(limits) {
    for (auto [item, f] : db.item_freq()) {
      ids_.push_back(item);
      freq_.push_back(f);
    }
    std::vector<TidList> tids(ids_.size());
    for (std::size_t t = 0; t < db.transaction_count(); ++t) {
      for (Item item : db.transaction(t)) {
        auto idx = std::lower_bound(ids_.begin(), ids_.end(), item) - ids_.begin();
        tids[idx].push_back(static_cast<std::uint32_t>(t));
      }
    }
    tids_ = std::move(tids);
  }

  std::uint64_t item_freq(std::uint32_t idx) const { return freq_[idx]; }

  std::vector<FrequentItemset> run(const ItemPredicate& keep_item,
                                   bool emit_items, const SetPredicate& bound,
                                   const SetPredicate& keep) {
    std::vector<FrequentItemset> out;
    std::vector<Candidate> level;
    for (std::uint32_t i = 0; i < ids_.size(); ++i) {
      if (!keep_item(freq_[i])) continue;
      if (emit_items) emit(out, {i}, freq_[i]);
      level.push_back({{i}, tids_[i]});
    }

    std::size_t size = 1;
    while (level.size() > 1 && (!limits_.max_size || size < *limits_.max_size)) {
      std::unordered_set<std::vector<std::uint32_t>, DenseHash> members;
      if (size >= 2)
        for (const auto& c : level) members.insert(c.items);

      std::vector<Candidate> next;
      std::vector<std::uint32_t> items(size + 1);
      for (std::size_t i = 0; i < level.size(); ++i) {
        for (std::size_t j = i + 1; j < level.size(); ++j) {
          const auto& x = level[i].items;
          const auto& y = level[j].items;
          if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;
          std::copy(x.begin(), x.end(), items.begin());
          items.back() = y.back();
          if (size >= 2 && !all_subsets_present(items, members)) continue;
          if (!bound(items, 0)) continue;
          TidList t = intersect(level[i].tids, level[j].tids);
          if (t.empty() || !keep(items, t.size())) continue;
          emit(out, items, t.size());
          next.push_back({items, std::move(t)});
        }
      }
      level = std::move(next);
      ++size;
    }
    return out;
  }

 private:
  static bool all_subsets_present(
      const std::vector<std::uint32_t>& items,
      const std::unordered_set<std::vector<std::uint32_t>, DenseHash>& members) {
    std::vector<std::uint32_t> sub(items.size() - 1);
    // the two subsets dropping one of the last two items are the join parents
    for (std::size_t drop = 0; drop + 2 < items.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t k = 0; k < items.size(); ++k)
        if (k != drop) sub[w++] = items[k];
      if (!members.contains(sub)) return false;
    }
    return true;
  }

  void emit(std::vector<FrequentItemset>& out,
            const std::vector<std::uint32_t>& items, std::uint64_t freq) {
    std::vector<Item> ids;
    ids.reserve(items.size());
    for (auto i : items) ids.push_back(ids_[i]);
    out.push_back({Itemset::from_sorted(std::move(ids)), freq,
                   static_cast<double>(freq) /
                       static_cast<double>(db_.transaction_count())});
    if (limits_.max_itemsets && out.size() > *limits_.max_itemsets)
      throw MiningAborted("more than " + std::to_string(*limits_.max_itemsets) +
                          " itemsets emitted");
  }

  const TransactionDatabase& db_;
  LevelwiseLimits limits_;
  std::vector<Item> ids_;
  std::vector<std::uint64_t> freq_;
  std::vector<TidList> tids_;
};

}  // namespace

std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db,
                                           double sigma,
                                           const LevelwiseLimits& limits) {
  if (!(sigma > 0.0 && sigma <= 1.0))
    throw std::invalid_argument("minimum support must be in (0, 1]");
  if (db.transaction_count() == 0) return {};
  const double n = static_cast<double>(db.transaction_count());
  auto frequent = [&](std::uint64_t f) { return static_cast<double>(f) / n >= sigma; };
  LevelwiseMiner miner(db, limits);
  return miner.run(
      frequent, true,
      [](const std::vector<std::uint32_t>&, std::uint64_t) { return true; },
      [&](const std::vector<std::uint32_t>&, std::uint64_t f) { return frequent(f); });
}

double all_confidence(const TransactionDatabase& db, const Itemset& z) {
  if (z.size() < 2)
    throw std::invalid_argument("all-confidence needs at least two items");
  std::uint64_t max_freq = 0;
  for (Item i : z) {
    auto f = db.freq(i);
    if (f == 0)
      throw std::invalid_argument("item " + std::to_string(i) +
                                  " does not occur in the database");
    max_freq = std::max(max_freq, f);
  }
  // supp(z) / supp({i}) with the common 1/|D| cancelled
  return static_cast<double>(db.freq(z)) / static_cast<double>(max_freq);
}

std::vector<FrequentItemset> mine_allconf(const TransactionDatabase& db,
                                          double gamma,
                                          const LevelwiseLimits& limits) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("all-confidence threshold must be in (0, 1]");
  if (db.transaction_count() == 0) return {};
  LevelwiseMiner miner(db, limits);
  auto max_freq = [&](const std::vector<std::uint32_t>& items) {
    std::uint64_t m = 0;
    for (auto i : items) m = std::max(m, miner.item_freq(i));
    return m;
  };
  return miner.run(
      [](std::uint64_t) { return true; }, false,
      [&](const std::vector<std::uint32_t>& items, std::uint64_t) {
        // freq(z) <= min item freq
        std::uint64_t lo = miner.item_freq(items[0]);
        for (auto i : items) lo = std::min(lo, miner.item_freq(i));
        return static_cast<double>(lo) / static_cast<double>(max_freq(items)) >= gamma;
      },
      [&](const std::vector<std::uint32_t>& items, std::uint64_t f) {
        return static_cast<double>(f) / static_cast<double>(max_freq(items)) >= gamma;
      });
}

double confidence(const TransactionDatabase& db, const Itemset& antecedent,
                  Item consequent) {
  const double base = support(db, antecedent);
  if (!(base > 0.0))
    throw std::invalid_argument("confidence: antecedent has zero support");
  return support(db, antecedent.with(consequent)) / base;
}

}  // namespace nbmine
