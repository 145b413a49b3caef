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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "nbmine/itemset.hpp"

namespace nbmine {

/// Transaction payloads in compressed-row form. Shared, never mutated.
struct TransactionStore {
  std::vector<Item> items;
  std::vector<std::size_t> offsets{0};
  Item max_item = 0;

  std::size_t size() const { return offsets.size() - 1; }
  std::span<const Item> row(std::size_t i) const {
    return {items.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

/// An immutable view over a subset of rows of a shared TransactionStore,
/// with cached item frequencies and incidence total.
///
/// Projections share the store and only copy row indices.
class TransactionDatabase {
 public:
  TransactionDatabase();

  /// Builds a database from raw baskets. Items in each basket are sorted and
  /// duplicates collapsed.
  static TransactionDatabase from_baskets(
      const std::vector<std::vector<Item>>& baskets);

  std::size_t transaction_count() const { return rows_.size(); }
  std::uint64_t incidence_total() const { return incidence_total_; }
  const std::map<Item, std::uint64_t>& item_freq() const { return item_freq_; }
  std::size_t item_count() const { return item_freq_.size(); }

  std::span<const Item> transaction(std::size_t i) const {
    return store_->row(rows_[i]);
  }

  /// Occurrence count of a single item (0 when absent).
  std::uint64_t freq(Item item) const;
  /// Occurrence count of an itemset by a full scan.
  std::uint64_t freq(const Itemset& items) const;

  /// The first `n` transactions (or all, if fewer).
  TransactionDatabase head(std::size_t n) const;

  /// Copies of all baskets, in order.
  std::vector<std::vector<Item>> baskets() const;

  const TransactionStore& store() const { return *store_; }
  const std::vector<std::uint32_t>& rows() const { return rows_; }

  /// Builds a view over `rows` of this database's store.
  TransactionDatabase select_rows(std::vector<std::uint32_t> rows) const;

 private:
  TransactionDatabase(std::shared_ptr<const TransactionStore> store,
                      std::vector<std::uint32_t> rows);
  void recount();

  std::shared_ptr<const TransactionStore> store_;
  std::vector<std::uint32_t> rows_;
  std::map<Item, std::uint64_t> item_freq_;
  std::uint64_t incidence_total_ = 0;
};

struct ItemCount {
  Item item;
  std::uint64_t count;
  friend bool operator==(const ItemCount&, const ItemCount&) = default;
};

/// Co-occurrence counts of every candidate 1-extension of `base`.
struct ExtensionCounts {
  Itemset base;
  /// Ascending by item; only items seen in at least one transaction.
  std::vector<ItemCount> counts;
  /// Sum over transactions containing `base` of |t \ base|.
  std::uint64_t rescale_sum = 0;

  /// Count for `item`, 0 if it never co-occurs with `base`.
  std::uint64_t count(Item item) const;
};

/// Reads a basket file: one transaction per line, whitespace-separated
/// non-negative integer ids, '#' comment lines and blank lines skipped.
TransactionDatabase load_basket(const std::filesystem::path& path);
TransactionDatabase read_basket(std::istream& in);

void write_basket(const TransactionDatabase& db,
                  const std::filesystem::path& path);
void write_basket(const TransactionDatabase& db, std::ostream& out);

/// Transactions of `db` that contain every item of `items`, in order.
TransactionDatabase project(const TransactionDatabase& db,
                            const Itemset& items);

/// Counts candidate items over a database whose transactions all contain
/// `base`. Throws std::invalid_argument if one does not.
ExtensionCounts extension_counts(const TransactionDatabase& db_base,
                                 const Itemset& base);

/// Fraction of transactions containing `items`. Throws on an empty database.
double support(const TransactionDatabase& db, const Itemset& items);

namespace detail {

/// Reusable counting buffer for candidate items. Dense when item ids are
/// small enough, hashed otherwise.
class ExtensionCounter {
 public:
  explicit ExtensionCounter(Item max_item);

  /// Counts items of `rows` not in `base`. Rows must contain `base`; with
  /// `check` set a violating row throws std::invalid_argument.
  ExtensionCounts count(const TransactionStore& store,
                        std::span<const std::uint32_t> rows,
                        const Itemset& base, bool check);

 private:
  std::vector<std::uint64_t> dense_;
  std::vector<Item> touched_;
  bool use_dense_;
};

}  // namespace detail

}  // namespace nbmine
