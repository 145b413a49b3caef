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

#include "nbmine/itemset_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "nbmine/error.hpp"

namespace nbmine {

void write_itemsets(const std::vector<MinedItemset>& itemsets, std::ostream& out) {
  for (const auto& m : itemsets) {
    std::ostringstream prec;
    prec << std::setprecision(12) << m.predicted_precision;
    out << m.items.to_string() << '\t' << m.freq << '\t' << m.sigma_freq << '\t'
        << prec.str() << '\n';
  }
}

void write_itemsets(const std::vector<FrequentItemset>& itemsets,
                    const std::string& threshold, std::ostream& out) {
  for (const auto& f : itemsets)
    out << f.items.to_string() << '\t' << f.freq << '\t' << threshold << "\t\n";
}

std::vector<Itemset> read_itemsets(std::istream& in) {
  std::vector<Itemset> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
      continue;
    std::istringstream ids(line.substr(0, line.find('\t')));
    std::vector<Item> items;
    std::string tok;
    while (ids >> tok) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok[0] == '-' || v > 0xFFFFFFFFull)
        throw ParseError("bad item id '" + tok + "'", line_no);
      items.push_back(static_cast<Item>(v));
    }
    out.emplace_back(std::move(items));
  }
  return out;
}

std::vector<Itemset> read_itemsets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open itemset file " + path.string());
  return read_itemsets(in);
}

}  // namespace nbmine
