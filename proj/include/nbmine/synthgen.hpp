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

// Synthetic market-basket generator built around "maximal potentially large
// itemsets" (patterns), reporting every pattern it used as ground truth.
//
// All randomness comes from one std::mt19937_64 seeded with GenConfig::seed.
// Draw order:
//   1. For each pattern p = 0..n_patterns-1:
//        size     = max(1, Poisson(avg_pattern_size)), capped at n_items
//        if p > 0: reuse fraction f = min(1, Exp(mean = correlation));
//                  round(f * size) items (at most |previous|) are taken from
//                  the previous pattern by partial Fisher-Yates shuffle
//        the rest: uniform item ids in [0, n_items), rejecting repeats
//        weight   = Exp(mean = 1)
//   2. Weights are normalized to sum to 1.
//   3. For each transaction:
//        target = max(1, Poisson(avg_transaction_size))
//        a pattern carried over from the previous transaction is added first
//        then, until the basket reaches target: pick a pattern by weight,
//        drop uniformly chosen items while Uniform < corruption, and add it.
//        A pattern that would overflow a non-empty basket is added anyway
//        when Uniform < 0.5, otherwise it is carried to the next
//        transaction; either way the transaction ends. Draws that add no
//        new item are skipped, and after 1000 of them the transaction is
//        closed as is.
// Uniform draws use the top 53 bits of one engine output; Exp and Poisson
// are derived from them by inversion.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "nbmine/itemset.hpp"
#include "nbmine/transactions.hpp"

namespace nbmine {

struct GenConfig {
  std::uint64_t n_transactions = 100000;
  double avg_transaction_size = 10.0;
  std::uint32_t n_items = 1000;
  std::uint64_t n_patterns = 2000;
  double avg_pattern_size = 4.0;
  double correlation = 0.5;
  double corruption = 0.5;
  std::uint64_t seed = 1;

  void validate() const;

  /// Named setups: "artif-1" (|I| = 4, |L| = 2000) and "artif-2"
  /// (|I| = 2, |L| = 4000); 100,000 transactions of average size 10 over
  /// 1,000 items.
  static GenConfig preset(const std::string& name);
};

struct Pattern {
  Itemset items;
  double weight = 0.0;
};

struct GroundTruth {
  std::vector<Pattern> patterns;
};

struct GeneratedData {
  TransactionDatabase db;
  GroundTruth truth;
};

/// Deterministic draw source shared by the generator and its tests.
class SeededDraws {
 public:
  explicit SeededDraws(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double exponential(double mean);
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

GeneratedData generate(const GenConfig& config);

void write_truth(const GroundTruth& truth, std::ostream& out);
void write_truth(const GroundTruth& truth, const std::filesystem::path& path);
/// Weights are renormalized to sum to 1.
GroundTruth read_truth(std::istream& in);
GroundTruth read_truth(const std::filesystem::path& path);

}  // namespace nbmine
