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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "nbmine/itemset.hpp"
#include "nbmine/nb_model.hpp"
#include "nbmine/synthgen.hpp"
#include "nbmine/transactions.hpp"

namespace nbmine {

using ItemsetSet = std::unordered_set<Itemset, ItemsetHash>;

enum class ScoringMode {
  /// Positives are all patterns plus every subset of size >= 2.
  kSubsetClosure,
  /// Positives are the patterns of size >= 2 only.
  kPatternsOnly,
};

ScoringMode parse_scoring_mode(const std::string& name);
std::string to_string(ScoringMode mode);

struct SizeCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
};

struct EvalReport {
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t positives_total = 0;
  /// Empty when nothing was mined.
  std::optional<double> precision;
  /// 0 when there are no positives.
  double recall = 0.0;
  std::map<std::size_t, SizeCounts> by_size;
};

/// Every pattern and all of its subsets, restricted to size >= 2.
ItemsetSet positives_closure(const GroundTruth& truth);

ItemsetSet positives(const GroundTruth& truth, ScoringMode mode);

/// Size-1 and duplicate mined itemsets are dropped before counting.
EvalReport score(const std::vector<Itemset>& mined, const ItemsetSet& positives);
EvalReport score(const std::vector<Itemset>& mined, const GroundTruth& truth,
                 ScoringMode mode = ScoringMode::kSubsetClosure);

enum class Method { kNbFrequent, kMinSupport, kAllConfidence };

struct SweepSpec {
  Method method = Method::kNbFrequent;
  /// Only used by kNbFrequent.
  double theta = 0.5;
  std::vector<double> grid;

  std::string label() const;
};

struct SweepEntry {
  std::string method;
  double parameter = 0.0;
  std::optional<EvalReport> report;
  std::uint64_t mined_count = 0;
  std::size_t max_size = 0;
  double seconds = 0.0;
  /// Non-empty when the run failed.
  std::string error;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
};

struct SweepOptions {
  NBParams params;
  ScoringMode mode = ScoringMode::kSubsetClosure;
  /// Runs beyond this many itemsets abort and are recorded as failures.
  std::optional<std::size_t> max_itemsets;
  unsigned jobs = 1;
};

/// Default parameter grids.
std::vector<double> default_pi_grid();
std::vector<double> default_support_grid();
std::vector<double> default_allconf_grid();

/// Runs every method at every grid point. Entries come out in spec order
/// regardless of `jobs`.
SweepResult sweep(const TransactionDatabase& db, const GroundTruth& truth,
                  const std::vector<SweepSpec>& specs,
                  const SweepOptions& options);

/// Tab-separated: method, parameter, mined_count, max_size, tp, fp,
/// positives_total, precision, recall.
void write_sweep_table(const SweepResult& result, std::ostream& out);

}  // namespace nbmine
