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

#include "nbmine/nb_mining.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nbmine/error.hpp"

namespace nbmine {

namespace {

// Precision this close to pi counts as reaching it, so that exact ties
// (common with small integer counts) are not decided by round-off.
constexpr double kPrecisionSlack = 1e-12;

}  // namespace

void MinerConfig::validate() const {
  if (!(pi > 0.0 && pi <= 1.0))
    throw std::invalid_argument("pi must be in (0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("theta must be in [0, 1]");
  if (!(params.k > 0.0) || !(params.a > 0.0))
    throw std::invalid_argument("model parameters must satisfy k > 0, a > 0");
  if (!(params.a_per_incidence > 0.0))
    throw std::invalid_argument("model has no per-incidence scale");
  if (max_size && *max_size < 1)
    throw std::invalid_argument("max_size must be at least 1");
}

PrecisionCurve::PrecisionCurve(const FreqHistogram& o_hist,
                               double n_candidates, double k, double a_l)
    : n_candidates_(n_candidates) {
  if (!o_hist.counts.empty()) r_max_ = o_hist.counts.rbegin()->first;
  observed_suffix_.assign(r_max_ + 2, 0.0);
  for (auto [r, c] : o_hist.counts) observed_suffix_[r] += static_cast<double>(c);
  for (std::uint64_t r = r_max_ + 1; r-- > 0;)
    observed_suffix_[r] += observed_suffix_[r + 1];
  tail_ = nb_tail_table(k, a_l, r_max_);
}

double PrecisionCurve::observed_at_least(std::uint64_t rho) const {
  return rho <= r_max_ ? observed_suffix_[rho] : 0.0;
}

double PrecisionCurve::expected_at_least(std::uint64_t rho) const {
  // Beyond r_max the tail is never consulted by the threshold search;
  // report the last tabulated value as an upper bound.
  return n_candidates_ * tail_[std::min<std::uint64_t>(rho, r_max_ + 1)];
}

double PrecisionCurve::precision(std::uint64_t rho) const {
  if (rho == 0) throw std::invalid_argument("precision: rho must be >= 1");
  const double o = observed_at_least(rho);
  const double e = expected_at_least(rho);
  if (o > 0.0 && o >= e) return (o - e) / o;
  return 0.0;
}

std::optional<std::uint64_t> PrecisionCurve::find_threshold(double pi) const {
  if (r_max_ == 0) return std::nullopt;
  std::uint64_t rho = r_max_;
  const double bar = pi - kPrecisionSlack;
  if (precision(rho) < bar) return std::nullopt;
  while (rho > 1 && precision(rho - 1) >= bar) --rho;
  return rho;
}

double predicted_precision(const FreqHistogram& o_hist, double n_candidates,
                           double k, double a_l, std::uint64_t rho) {
  return PrecisionCurve(o_hist, n_candidates, k, a_l).precision(rho);
}

std::optional<std::uint64_t> find_threshold(const FreqHistogram& o_hist,
                                            double n_candidates, double k,
                                            double a_l, double pi) {
  return PrecisionCurve(o_hist, n_candidates, k, a_l).find_threshold(pi);
}

Selection nb_select(const Itemset& base, const ExtensionCounts& counts,
                    const NBParams& params, double pi) {
  Selection sel;
  if (counts.counts.empty() || counts.rescale_sum == 0) return sel;
  if (!(params.a_per_incidence > 0.0))
    throw std::invalid_argument("nb_select: model has no per-incidence scale");

  sel.a_l = rescale_for_itemset(params.a_per_incidence, counts.rescale_sum);
  sel.n_candidates =
      std::max(params.n_total - static_cast<double>(base.size()), 1.0);

  FreqHistogram o_hist;
  for (const auto& c : counts.counts) ++o_hist.counts[c.count];
  PrecisionCurve curve(o_hist, sel.n_candidates, params.k, sel.a_l);
  sel.sigma_freq = curve.find_threshold(pi);
  if (!sel.sigma_freq) return sel;

  sel.predicted_precision = curve.precision(*sel.sigma_freq);
  for (const auto& c : counts.counts)
    if (c.count >= *sel.sigma_freq) sel.items.push_back(c.item);
  return sel;
}

const Repository::Entry* Repository::find(const Itemset& s) const {
  auto it = map_.find(s);
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<Itemset> nb_gen(const Itemset& base,
                            std::span<const Item> candidates, double theta,
                            Repository& repo) {
  std::vector<Itemset> accepted;
  for (Item c : candidates) {
    Itemset next = base.with(c);
    auto& e = repo.entry(next);
    if (e.frequent) continue;
    ++e.count;
    if (static_cast<double>(e.count) < theta * static_cast<double>(next.size()))
      continue;
    e.frequent = true;
    accepted.push_back(std::move(next));
  }
  return accepted;
}

namespace {

class DepthFirstMiner {
 public:
  DepthFirstMiner(const TransactionDatabase& db, const MinerConfig& config)
      : db_(db), config_(config), counter_(db.store().max_item) {}

  MiningResult run() {
    expand(Itemset{}, db_.rows());
    std::sort(result_.itemsets.begin(), result_.itemsets.end(),
              [](const MinedItemset& x, const MinedItemset& y) {
                return x.items < y.items;
              });
    return std::move(result_);
  }

 private:
  void expand(const Itemset& base, const std::vector<std::uint32_t>& rows) {
    std::vector<Item> candidates;
    std::vector<ItemCount> accepted_counts;
    std::uint64_t sigma = 0;
    double precision = 0.0;
    {
      auto counts = counter_.count(db_.store(), rows, base, false);
      if (base.empty()) {
        for (const auto& c : counts.counts) candidates.push_back(c.item);
      } else {
        auto sel = nb_select(base, counts, config_.params, config_.pi);
        result_.thresholds.push_back({base, rows.size(), sel.sigma_freq,
                                      sel.predicted_precision,
                                      sel.items.size()});
        candidates = std::move(sel.items);
        sigma = sel.sigma_freq.value_or(0);
        precision = sel.predicted_precision;
      }
      accepted_counts.reserve(candidates.size());
      for (Item c : candidates) accepted_counts.push_back({c, counts.count(c)});
    }  // counts released before descending

    auto accepted = nb_gen(base, candidates, config_.theta, repo_);
    for (const auto& next : accepted) {
      const Item added = added_item(base, next);
      const auto freq = std::lower_bound(
          accepted_counts.begin(), accepted_counts.end(), added,
          [](const ItemCount& c, Item i) { return c.item < i; })->count;

      if (next.size() >= 2) {
        result_.itemsets.push_back({next, freq, sigma, precision});
        if (config_.max_itemsets &&
            result_.itemsets.size() > *config_.max_itemsets)
          throw MiningAborted("more than " +
                              std::to_string(*config_.max_itemsets) +
                              " itemsets emitted");
      }
      if (config_.max_size && next.size() >= *config_.max_size) continue;

      std::vector<std::uint32_t> sub;
      sub.reserve(freq);
      const auto& store = db_.store();
      for (std::uint32_t r : rows) {
        auto t = store.row(r);
        if (std::binary_search(t.begin(), t.end(), added)) sub.push_back(r);
      }
      expand(next, sub);
    }
  }

  static Item added_item(const Itemset& base, const Itemset& next) {
    auto mismatch = std::mismatch(base.begin(), base.end(), next.begin());
    return *mismatch.second;
  }

  const TransactionDatabase& db_;
  const MinerConfig& config_;
  Repository repo_;
  detail::ExtensionCounter counter_;
  MiningResult result_;
};

}  // namespace

MiningResult nb_dfs(const TransactionDatabase& db, const MinerConfig& config) {
  config.validate();
  if (db.transaction_count() == 0) return {};
  return DepthFirstMiner(db, config).run();
}

}  // namespace nbmine
