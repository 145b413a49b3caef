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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace nbmine {

using Item = std::uint32_t;

/// A set of items kept as a strictly increasing vector.
class Itemset {
 public:
  Itemset() = default;
  Itemset(std::initializer_list<Item> items) : items_(items) { normalize(); }
  explicit Itemset(std::vector<Item> items) : items_(std::move(items)) {
    normalize();
  }

  /// Wraps items that are already strictly increasing; no check is made.
  static Itemset from_sorted(std::vector<Item> items) {
    Itemset s;
    s.items_ = std::move(items);
    return s;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  Item operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Item>& items() const { return items_; }
  std::span<const Item> view() const { return items_; }

  bool contains(Item item) const {
    return std::binary_search(items_.begin(), items_.end(), item);
  }

  /// True when every item of this set is in `sorted_items`.
  bool subset_of(std::span<const Item> sorted_items) const {
    return std::includes(sorted_items.begin(), sorted_items.end(),
                         items_.begin(), items_.end());
  }

  Itemset with(Item item) const {
    Itemset out;
    out.items_.reserve(items_.size() + 1);
    auto pos = std::lower_bound(items_.begin(), items_.end(), item);
    out.items_.insert(out.items_.end(), items_.begin(), pos);
    if (pos == items_.end() || *pos != item) out.items_.push_back(item);
    out.items_.insert(out.items_.end(), pos, items_.end());
    return out;
  }

  Itemset without(Item item) const {
    Itemset out;
    out.items_.reserve(items_.size());
    for (Item i : items_)
      if (i != item) out.items_.push_back(i);
    return out;
  }

  std::string to_string() const;

  friend bool operator==(const Itemset&, const Itemset&) = default;
  friend auto operator<=>(const Itemset& a, const Itemset& b) {
    // size first, then lexicographic
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.items_ <=> b.items_;
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<Item> items_;
};

struct ItemsetHash {
  std::size_t operator()(const Itemset& s) const noexcept {
    // FNV-1a over the item ids
    std::uint64_t h = 14695981039346656037ull;
    for (Item i : s) {
      h ^= i;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::string Itemset::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(items_[i]);
  }
  return out;
}

}  // namespace nbmine
