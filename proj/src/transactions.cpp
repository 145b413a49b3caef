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

#include "nbmine/transactions.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "nbmine/error.hpp"

namespace nbmine {

namespace {

// Dense counting buffers above this many slots fall back to hashing.
constexpr std::size_t kMaxDenseItems = std::size_t{1} << 24;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

TransactionDatabase::TransactionDatabase()
    : store_(std::make_shared<TransactionStore>()) {}

TransactionDatabase::TransactionDatabase(
    std::shared_ptr<const TransactionStore> store,
    std::vector<std::uint32_t> rows)
    : store_(std::move(store)), rows_(std::move(rows)) {
  recount();
}

TransactionDatabase TransactionDatabase::from_baskets(
    const std::vector<std::vector<Item>>& baskets) {
  if (baskets.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("too many transactions");
  auto store = std::make_shared<TransactionStore>();
  store->offsets.reserve(baskets.size() + 1);
  std::vector<Item> buf;
  for (const auto& basket : baskets) {
    buf.assign(basket.begin(), basket.end());
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    store->items.insert(store->items.end(), buf.begin(), buf.end());
    store->offsets.push_back(store->items.size());
    if (!buf.empty()) store->max_item = std::max(store->max_item, buf.back());
  }
  std::vector<std::uint32_t> rows(baskets.size());
  std::iota(rows.begin(), rows.end(), 0u);
  return TransactionDatabase(std::move(store), std::move(rows));
}

void TransactionDatabase::recount() {
  item_freq_.clear();
  incidence_total_ = 0;
  std::unordered_map<Item, std::uint64_t> freq;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto t = transaction(i);
    incidence_total_ += t.size();
    for (Item item : t) ++freq[item];
  }
  item_freq_.insert(freq.begin(), freq.end());
}

std::uint64_t TransactionDatabase::freq(Item item) const {
  auto it = item_freq_.find(item);
  return it == item_freq_.end() ? 0 : it->second;
}

std::uint64_t TransactionDatabase::freq(const Itemset& items) const {
  if (items.size() == 1) return freq(items[0]);
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (items.subset_of(transaction(i))) ++n;
  return n;
}

TransactionDatabase TransactionDatabase::head(std::size_t n) const {
  std::vector<std::uint32_t> rows(rows_.begin(),
                                  rows_.begin() + std::min(n, rows_.size()));
  return TransactionDatabase(store_, std::move(rows));
}

std::vector<std::vector<Item>> TransactionDatabase::baskets() const {
  std::vector<std::vector<Item>> out;
  out.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto t = transaction(i);
    out.emplace_back(t.begin(), t.end());
  }
  return out;
}

TransactionDatabase TransactionDatabase::select_rows(
    std::vector<std::uint32_t> rows) const {
  return TransactionDatabase(store_, std::move(rows));
}

std::uint64_t ExtensionCounts::count(Item item) const {
  auto it = std::lower_bound(
      counts.begin(), counts.end(), item,
      [](const ItemCount& c, Item i) { return c.item < i; });
  return (it != counts.end() && it->item == item) ? it->count : 0;
}

TransactionDatabase read_basket(std::istream& in) {
  std::vector<std::vector<Item>> baskets;
  std::string line;
  std::size_t line_no = 0;
  std::vector<Item> basket;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::size_t first = 0;
    while (first < rest.size() && is_space(rest[first])) ++first;
    if (first == rest.size() || rest[first] == '#') continue;

    basket.clear();
    std::size_t pos = first;
    while (pos < rest.size()) {
      while (pos < rest.size() && is_space(rest[pos])) ++pos;
      if (pos == rest.size()) break;
      std::size_t end = pos;
      while (end < rest.size() && !is_space(rest[end])) ++end;
      std::string_view tok = rest.substr(pos, end - pos);
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() ||
          value > std::numeric_limits<Item>::max())
        throw ParseError("invalid item id '" + std::string(tok) + "'", line_no);
      basket.push_back(static_cast<Item>(value));
      pos = end;
    }
    baskets.push_back(basket);
  }
  if (in.bad()) throw IoError("read failure");
  return TransactionDatabase::from_baskets(baskets);
}

TransactionDatabase load_basket(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open basket file " + path.string());
  return read_basket(in);
}

void write_basket(const TransactionDatabase& db, std::ostream& out) {
  for (std::size_t i = 0; i < db.transaction_count(); ++i) {
    auto t = db.transaction(i);
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (j) out << ' ';
      out << t[j];
    }
    out << '\n';
  }
}

void write_basket(const TransactionDatabase& db,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write basket file " + path.string());
  write_basket(db, out);
  if (!out) throw IoError("write failure on " + path.string());
}

TransactionDatabase project(const TransactionDatabase& db,
                            const Itemset& items) {
  if (items.empty()) return db;
  std::vector<std::uint32_t> rows;
  for (std::size_t i = 0; i < db.transaction_count(); ++i)
    if (items.subset_of(db.transaction(i))) rows.push_back(db.rows()[i]);
  return db.select_rows(std::move(rows));
}

ExtensionCounts extension_counts(const TransactionDatabase& db_base,
                                 const Itemset& base) {
  detail::ExtensionCounter counter(db_base.store().max_item);
  return counter.count(db_base.store(), db_base.rows(), base, true);
}

double support(const TransactionDatabase& db, const Itemset& items) {
  if (db.transaction_count() == 0)
    throw std::invalid_argument("support of an empty database is undefined");
  return static_cast<double>(db.freq(items)) /
         static_cast<double>(db.transaction_count());
}

namespace detail {

ExtensionCounter::ExtensionCounter(Item max_item)
    : use_dense_(std::size_t{max_item} + 1 <= kMaxDenseItems) {
  if (use_dense_) dense_.assign(std::size_t{max_item} + 1, 0);
}

ExtensionCounts ExtensionCounter::count(const TransactionStore& store,
                                        std::span<const std::uint32_t> rows,
                                        const Itemset& base, bool check) {
  ExtensionCounts out;
  out.base = base;
  std::unordered_map<Item, std::uint64_t> sparse;
  touched_.clear();

  for (std::uint32_t r : rows) {
    auto t = store.row(r);
    if (check && !base.subset_of(t))
      throw std::invalid_argument(
          "extension_counts: transaction does not contain the base itemset");
    // t and base are both sorted: merge to skip base items.
    auto b = base.begin();
    for (Item item : t) {
      while (b != base.end() && *b < item) ++b;
      if (b != base.end() && *b == item) continue;
      ++out.rescale_sum;
      if (use_dense_) {
        if (dense_[item]++ == 0) touched_.push_back(item);
      } else {
        ++sparse[item];
      }
    }
  }

  if (use_dense_) {
    std::sort(touched_.begin(), touched_.end());
    out.counts.reserve(touched_.size());
    for (Item item : touched_) {
      out.counts.push_back({item, dense_[item]});
      dense_[item] = 0;
    }
  } else {
    out.counts.reserve(sparse.size());
    for (auto [item, n] : sparse) out.counts.push_back({item, n});
    std::sort(out.counts.begin(), out.counts.end(),
              [](const ItemCount& a, const ItemCount& b) { return a.item < b.item; });
  }
  return out;
}

}  // namespace detail

}  // namespace nbmine
