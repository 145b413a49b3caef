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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nbmine/itemset.hpp"
#include "nbmine/transactions.hpp"

namespace nbmine {

struct FrequentItemset {
  Itemset items;
  std::uint64_t freq = 0;
  double support = 0.0;
};

struct LevelwiseLimits {
  std::optional<std::size_t> max_size;
  /// Abort with MiningAborted past this many itemsets.
  std::optional<std::size_t> max_itemsets;
};

/// All itemsets (size >= 1) with support >= sigma, level by level.
std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db,
                                           double sigma,
                                           const LevelwiseLimits& limits = {});

/// supp(z) / max_i supp({i}). Requires |z| >= 2 and every item present.
double all_confidence(const TransactionDatabase& db, const Itemset& z);

/// All itemsets of size >= 2 with all-confidence >= gamma.
std::vector<FrequentItemset> mine_allconf(const TransactionDatabase& db,
                                          double gamma,
                                          const LevelwiseLimits& limits = {});

/// supp(antecedent + {consequent}) / supp(antecedent).
double confidence(const TransactionDatabase& db, const Itemset& antecedent,
                  Item consequent);

}  // namespace nbmine
