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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "nbmine/nbmine.hpp"

namespace py = pybind11;
using namespace nbmine;

namespace {

std::vector<std::vector<Item>> as_baskets(const py::iterable& rows) {
  std::vector<std::vector<Item>> out;
  for (const auto& row : rows) out.push_back(py::cast<std::vector<Item>>(row));
  return out;
}

py::tuple as_tuple(const Itemset& s) { return py::cast(s.items()); }

Itemset as_itemset(const py::iterable& items) {
  return Itemset(py::cast<std::vector<Item>>(items));
}

FreqHistogram as_histogram(const std::map<std::uint64_t, std::uint64_t>& counts) {
  return FreqHistogram{counts};
}

std::string params_repr(const NBParams& p) {
  std::ostringstream os;
  os << "NBParams(k=" << p.k << ", a=" << p.a << ", n_total=" << p.n_total
     << ", incidence_total=" << p.incidence_total << ")";
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_nbmine, m) {
  m.doc() = "Model-based frequent itemset mining with a negative binomial baseline";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UnderdispersionError>(m, "UnderdispersionError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<MiningAborted>(m, "MiningAborted", base.ptr());

  py::class_<TransactionDatabase>(m, "TransactionDatabase")
      .def(py::init([](const py::iterable& rows) {
             return TransactionDatabase::from_baskets(as_baskets(rows));
           }),
           py::arg("baskets"))
      .def_static("load", &load_basket, py::arg("path"))
      .def("save", py::overload_cast<const TransactionDatabase&, const std::filesystem::path&>(
                       &write_basket),
           py::arg("path"))
      .def("__len__", &TransactionDatabase::transaction_count)
      .def_property_readonly("transaction_count", &TransactionDatabase::transaction_count)
      .def_property_readonly("incidence_total", &TransactionDatabase::incidence_total)
      .def_property_readonly("item_freq", &TransactionDatabase::item_freq)
      .def("baskets", &TransactionDatabase::baskets)
      .def("head", &TransactionDatabase::head, py::arg("n"))
      .def("freq", [](const TransactionDatabase& db, const py::iterable& items) {
        return db.freq(as_itemset(items));
      })
      .def("support", [](const TransactionDatabase& db, const py::iterable& items) {
        return support(db, as_itemset(items));
      })
      .def("project", [](const TransactionDatabase& db, const py::iterable& items) {
        return project(db, as_itemset(items));
      });

  py::class_<NBParams>(m, "NBParams")
      .def(py::init<>())
      .def_readwrite("k", &NBParams::k)
      .def_readwrite("a", &NBParams::a)
      .def_readwrite("a_per_incidence", &NBParams::a_per_incidence)
      .def_readwrite("n_total", &NBParams::n_total)
      .def_readwrite("incidence_total", &NBParams::incidence_total)
      .def_readwrite("transaction_count", &NBParams::transaction_count)
      .def_readwrite("em_iterations", &NBParams::em_iterations)
      .def_readwrite("trimmed_items", &NBParams::trimmed_items)
      .def("save", py::overload_cast<const NBParams&, const std::filesystem::path&>(&write_model))
      .def_static("load", py::overload_cast<const std::filesystem::path&>(&read_model))
      .def("__eq__", [](const NBParams& a, const NBParams& b) { return a == b; })
      .def("__repr__", &params_repr);

  m.def("nb_pmf", &nb_pmf, py::arg("k"), py::arg("a"), py::arg("r"));
  m.def("nb_pmf_prefix", &nb_pmf_prefix, py::arg("k"), py::arg("a"), py::arg("r_max"));
  m.def("nb_tail", &nb_tail, py::arg("k"), py::arg("a"), py::arg("rho"));
  m.def("fit_moments", [](double mean, double variance) {
    auto s = fit_moments(mean, variance);
    return py::make_tuple(s.k, s.a);
  }, py::arg("mean"), py::arg("variance"));
  m.def("fit", [](const TransactionDatabase& db, double trim,
                  std::optional<std::uint64_t> total_items) {
    FitOptions opt;
    opt.trim_fraction = trim;
    opt.total_items = total_items;
    return fit_database(db, opt).params;
  }, py::arg("db"), py::arg("trim") = 0.0, py::arg("total_items") = py::none(),
        "Fit the NB model to the item frequencies of a database.");
  m.def("gof_chi2", [](const TransactionDatabase& db, const NBParams& p, double trim) {
    auto hist = trim_top(FreqHistogram::of(db), trim).hist;
    auto g = gof_chi2(hist, p);
    return py::dict(py::arg("chi2") = g.chi2, py::arg("df") = g.df,
                    py::arg("p_value") = g.p_value);
  }, py::arg("db"), py::arg("params"), py::arg("trim") = 0.0);
  m.def("predicted_precision",
        [](const std::map<std::uint64_t, std::uint64_t>& o_hist, double n_candidates, double k,
           double a_l, std::uint64_t rho) {
          return predicted_precision(as_histogram(o_hist), n_candidates, k, a_l, rho);
        },
        py::arg("o_hist"), py::arg("n_candidates"), py::arg("k"), py::arg("a_l"), py::arg("rho"));
  m.def("find_threshold",
        [](const std::map<std::uint64_t, std::uint64_t>& o_hist, double n_candidates, double k,
           double a_l, double pi) {
          return find_threshold(as_histogram(o_hist), n_candidates, k, a_l, pi);
        },
        py::arg("o_hist"), py::arg("n_candidates"), py::arg("k"), py::arg("a_l"), py::arg("pi"));

  py::class_<MinedItemset>(m, "MinedItemset")
      .def_property_readonly("items", [](const MinedItemset& s) { return as_tuple(s.items); })
      .def_readonly("freq", &MinedItemset::freq)
      .def_readonly("sigma_freq", &MinedItemset::sigma_freq)
      .def_readonly("predicted_precision", &MinedItemset::predicted_precision)
      .def("__repr__", [](const MinedItemset& s) {
        return "MinedItemset((" + s.items.to_string() + "), freq=" + std::to_string(s.freq) + ")";
      });

  m.def("mine", [](const TransactionDatabase& db, const NBParams& params, double pi,
                   double theta, std::optional<std::size_t> max_size,
                   std::optional<std::size_t> max_itemsets) {
    MinerConfig cfg;
    cfg.params = params;
    cfg.pi = pi;
    cfg.theta = theta;
    cfg.max_size = max_size;
    cfg.max_itemsets = max_itemsets;
    py::gil_scoped_release release;
    return nb_dfs(db, cfg).itemsets;
  }, py::arg("db"), py::arg("params"), py::arg("pi") = 0.95, py::arg("theta") = 0.5,
        py::arg("max_size") = py::none(), py::arg("max_itemsets") = py::none(),
        "NB-frequent itemsets of size >= 2.");

  auto frequent_list = [](const std::vector<FrequentItemset>& v) {
    py::list out;
    for (const auto& f : v) out.append(py::make_tuple(as_tuple(f.items), f.freq));
    return out;
  };
  m.def("mine_support", [frequent_list](const TransactionDatabase& db, double sigma,
                                        std::optional<std::size_t> max_size) {
    return frequent_list(mine_frequent(db, sigma, {max_size, std::nullopt}));
  }, py::arg("db"), py::arg("sigma"), py::arg("max_size") = py::none(),
        "(items, freq) pairs with support >= sigma.");
  m.def("mine_allconf", [frequent_list](const TransactionDatabase& db, double gamma,
                                        std::optional<std::size_t> max_size) {
    return frequent_list(mine_allconf(db, gamma, {max_size, std::nullopt}));
  }, py::arg("db"), py::arg("gamma"), py::arg("max_size") = py::none());
  m.def("all_confidence", [](const TransactionDatabase& db, const py::iterable& items) {
    return all_confidence(db, as_itemset(items));
  });

  py::class_<GenConfig>(m, "GenConfig")
      .def(py::init<>())
      .def_static("preset", &GenConfig::preset, py::arg("name"))
      .def_readwrite("n_transactions", &GenConfig::n_transactions)
      .def_readwrite("avg_transaction_size", &GenConfig::avg_transaction_size)
      .def_readwrite("n_items", &GenConfig::n_items)
      .def_readwrite("n_patterns", &GenConfig::n_patterns)
      .def_readwrite("avg_pattern_size", &GenConfig::avg_pattern_size)
      .def_readwrite("correlation", &GenConfig::correlation)
      .def_readwrite("corruption", &GenConfig::corruption)
      .def_readwrite("seed", &GenConfig::seed);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def_property_readonly("patterns", [](const GroundTruth& t) {
        py::list out;
        for (const auto& p : t.patterns) out.append(py::make_tuple(as_tuple(p.items), p.weight));
        return out;
      })
      .def("save", py::overload_cast<const GroundTruth&, const std::filesystem::path&>(
                       &write_truth))
      .def_static("load", py::overload_cast<const std::filesystem::path&>(&read_truth));

  m.def("generate", [](const GenConfig& cfg) {
    auto g = generate(cfg);
    return py::make_tuple(std::move(g.db), std::move(g.truth));
  }, py::arg("config"), "Returns (TransactionDatabase, GroundTruth).");

  m.def("score", [](const py::iterable& mined, const GroundTruth& truth,
                    const std::string& mode) {
    std::vector<Itemset> sets;
    for (const auto& s : mined) {
      if (py::isinstance<MinedItemset>(s))
        sets.push_back(s.cast<const MinedItemset&>().items);
      else
        sets.push_back(as_itemset(py::reinterpret_borrow<py::iterable>(s)));
    }
    auto r = score(sets, truth, parse_scoring_mode(mode));
    return py::dict(py::arg("true_positives") = r.true_positives,
                    py::arg("false_positives") = r.false_positives,
                    py::arg("positives_total") = r.positives_total,
                    py::arg("precision") = r.precision, py::arg("recall") = r.recall);
  }, py::arg("mined"), py::arg("truth"), py::arg("mode") = "closure");
}
