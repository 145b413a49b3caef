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

// Model-based frequency constraint and the depth-first NB-frequent itemset
// miner.
//
// For an itemset l, the co-occurrence counts of its candidate items are
// compared with the NB baseline rescaled to the incidences of the
// transactions containing l. The local frequency threshold is the smallest
// count at which the predicted precision (o - e) / o of accepting every
// candidate at or above it stays at least pi. An itemset of size s > 1 is
// accepted once at least theta * s of its (s-1)-subsets accepted it as an
// extension.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "nbmine/itemset.hpp"
#include "nbmine/nb_model.hpp"
#include "nbmine/transactions.hpp"

namespace nbmine {

struct MinedItemset {
  Itemset items;
  std::uint64_t freq = 0;
  /// Local threshold of the subset whose acceptance admitted this itemset.
  std::uint64_t sigma_freq = 0;
  double predicted_precision = 0.0;
};

struct MinerConfig {
  double pi = 0.95;
  double theta = 0.5;
  NBParams params;
  /// Itemsets of this size are emitted but not expanded further.
  std::optional<std::size_t> max_size;
  /// Abort with MiningAborted once more itemsets than this are emitted.
  std::optional<std::size_t> max_itemsets;

  void validate() const;
};

/// Outcome of the threshold search for one expanded itemset.
struct LocalThreshold {
  Itemset base;
  std::uint64_t base_freq = 0;
  /// Empty when no count reaches the precision threshold.
  std::optional<std::uint64_t> sigma_freq;
  double predicted_precision = 0.0;
  std::size_t selected = 0;
};

struct MiningResult {
  /// Ordered by size, then lexicographically.
  std::vector<MinedItemset> itemsets;
  std::vector<LocalThreshold> thresholds;
};

/// Precision evaluation over one histogram of candidate counts, with the
/// NB tail computed once up to the largest observed count.
class PrecisionCurve {
 public:
  PrecisionCurve(const FreqHistogram& o_hist, double n_candidates, double k,
                 double a_l);

  std::uint64_t r_max() const { return r_max_; }
  /// Observed candidates with count >= rho.
  double observed_at_least(std::uint64_t rho) const;
  /// Expected candidates with count >= rho under the baseline.
  double expected_at_least(std::uint64_t rho) const;
  double precision(std::uint64_t rho) const;

  /// Scans down from r_max and stops at the first rho below pi. Values
  /// within 1e-12 of pi count as reaching it.
  std::optional<std::uint64_t> find_threshold(double pi) const;

 private:
  std::uint64_t r_max_ = 0;
  double n_candidates_;
  std::vector<double> observed_suffix_;
  std::vector<double> tail_;
};

double predicted_precision(const FreqHistogram& o_hist, double n_candidates,
                           double k, double a_l, std::uint64_t rho);

std::optional<std::uint64_t> find_threshold(const FreqHistogram& o_hist,
                                            double n_candidates, double k,
                                            double a_l, double pi);

struct Selection {
  std::vector<Item> items;
  std::optional<std::uint64_t> sigma_freq;
  double predicted_precision = 0.0;
  double a_l = 0.0;
  double n_candidates = 0.0;
};

/// Candidate items of `base` whose co-occurrence count reaches the local
/// threshold. Empty when there is no count mass to rescale by.
Selection nb_select(const Itemset& base, const ExtensionCounts& counts,
                    const NBParams& params, double pi);

/// Tracks, per itemset, whether it is already accepted and how many of its
/// subsets have proposed it.
class Repository {
 public:
  struct Entry {
    bool frequent = false;
    std::uint32_t count = 0;
  };

  const Entry* find(const Itemset& s) const;
  Entry& entry(const Itemset& s) { return map_[s]; }
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<Itemset, Entry, ItemsetHash> map_;
};

/// Registers base + {c} for each candidate and returns those that become
/// accepted now.
std::vector<Itemset> nb_gen(const Itemset& base,
                            std::span<const Item> candidates, double theta,
                            Repository& repo);

MiningResult nb_dfs(const TransactionDatabase& db, const MinerConfig& config);

}  // namespace nbmine
