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

// Itemset listing format, one itemset per line:
//   <ids, ascending, space-separated> TAB freq TAB sigma_freq TAB precision
// The precision column is empty for the baseline miners.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbmine/baselines.hpp"
#include "nbmine/itemset.hpp"
#include "nbmine/nb_mining.hpp"

namespace nbmine {

void write_itemsets(const std::vector<MinedItemset>& itemsets, std::ostream& out);

/// `threshold` fills the sigma_freq column.
void write_itemsets(const std::vector<FrequentItemset>& itemsets,
                    const std::string& threshold, std::ostream& out);

/// Reads only the item id column.
std::vector<Itemset> read_itemsets(std::istream& in);
std::vector<Itemset> read_itemsets(const std::filesystem::path& path);

}  // namespace nbmine
