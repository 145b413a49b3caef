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

#include "nbmine/nb_model.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nbmine/error.hpp"

namespace nbmine {

namespace {

constexpr double kMinClassExpectation = 5.0;
constexpr int kFittedParameters = 2;

void check_params(double k, double a) {
  if (!(k > 0.0) || !(a > 0.0) || !std::isfinite(k) || !std::isfinite(a))
    throw std::invalid_argument("NB parameters must satisfy k > 0 and a > 0");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::uint64_t FreqHistogram::observed_items() const {
  std::uint64_t n = 0;
  for (auto [r, c] : counts) n += c;
  return n;
}

std::uint64_t FreqHistogram::incidences() const {
  std::uint64_t n = 0;
  for (auto [r, c] : counts) n += r * c;
  return n;
}

FreqHistogram FreqHistogram::of(const TransactionDatabase& db) {
  FreqHistogram h;
  for (auto [item, f] : db.item_freq()) ++h.counts[f];
  return h;
}

Moments histogram_moments(const FreqHistogram& hist, double zero_class) {
  double n = zero_class;
  double s1 = 0.0;
  for (auto [r, c] : hist.counts) {
    n += static_cast<double>(c);
    s1 += static_cast<double>(r) * static_cast<double>(c);
  }
  if (n < 2.0)
    throw std::invalid_argument("moments need at least two items");
  Moments m;
  m.mean = s1 / n;
  // Centered second pass keeps the variance accurate for large counts.
  double ss = zero_class * m.mean * m.mean;
  for (auto [r, c] : hist.counts) {
    double d = static_cast<double>(r) - m.mean;
    ss += static_cast<double>(c) * d * d;
  }
  m.variance = ss / (n - 1.0);
  return m;
}

double nb_log_pmf(double k, double a, std::uint64_t r) {
  check_params(k, a);
  const double rr = static_cast<double>(r);
  return std::lgamma(k + rr) - std::lgamma(rr + 1.0) - std::lgamma(k) +
         rr * (std::log(a) - std::log1p(a)) - k * std::log1p(a);
}

double nb_pmf(double k, double a, std::uint64_t r) {
  return std::exp(nb_log_pmf(k, a, r));
}

std::vector<double> nb_pmf_prefix(double k, double a, std::uint64_t r_max) {
  check_params(k, a);
  std::vector<double> p(r_max + 1);
  const double q = a / (1.0 + a);
  p[0] = std::exp(-k * std::log1p(a));
  for (std::uint64_t r = 0; r < r_max; ++r)
    p[r + 1] = p[r] * ((k + static_cast<double>(r)) /
                       static_cast<double>(r + 1)) * q;
  return p;
}

std::vector<double> nb_tail_table(double k, double a, std::uint64_t r_max) {
  auto p = nb_pmf_prefix(k, a, r_max);
  std::vector<double> tail(r_max + 2);
  double cum = 0.0;
  tail[0] = 1.0;
  for (std::uint64_t r = 0; r <= r_max; ++r) {
    cum += p[r];
    tail[r + 1] = std::clamp(1.0 - cum, 0.0, 1.0);
  }
  return tail;
}

double nb_tail(double k, double a, std::uint64_t rho) {
  check_params(k, a);
  if (rho == 0) return 1.0;
  return nb_tail_table(k, a, rho - 1)[rho];
}

ShapeScale fit_moments(double mean, double variance) {
  if (!(mean > 0.0))
    throw std::invalid_argument("fit_moments: mean must be positive");
  if (!(variance > mean))
    throw UnderdispersionError(
        "variance " + format_double(variance) + " does not exceed mean " +
        format_double(mean) + "; negative binomial model not fittable");
  ShapeScale s;
  s.k = mean * mean / (variance - mean);
  s.a = mean / s.k;
  return s;
}

TrimResult trim_top(const FreqHistogram& hist, double fraction) {
  if (!(fraction >= 0.0) || !(fraction < 1.0))
    throw std::invalid_argument("trim fraction must be in [0, 1)");
  TrimResult out;
  out.hist = hist;
  const double target =
      std::ceil(fraction * static_cast<double>(hist.observed_items()) - 1e-9);
  auto remaining = static_cast<std::uint64_t>(std::max(target, 0.0));
  while (remaining > 0 && !out.hist.counts.empty()) {
    auto top = std::prev(out.hist.counts.end());
    std::uint64_t take = std::min(remaining, top->second);
    top->second -= take;
    remaining -= take;
    out.trimmed += take;
    if (top->second == 0) out.hist.counts.erase(top);
  }
  return out;
}

NBParams fit_em(const FreqHistogram& hist, std::optional<std::uint64_t> n_known,
                const EmOptions& options) {
  std::size_t positive_classes = 0;
  for (auto [r, c] : hist.counts)
    if (r > 0 && c > 0) ++positive_classes;
  if (positive_classes < 2)
    throw std::invalid_argument(
        "fit_em needs at least two distinct positive frequency classes");

  const auto observed = hist.observed_items();
  NBParams p;
  p.incidence_total = hist.incidences();

  if (n_known) {
    if (*n_known < observed)
      throw std::invalid_argument("known item total is below observed items");
    const double zero = static_cast<double>(*n_known - observed);
    auto m = histogram_moments(hist, zero);
    auto ka = fit_moments(m.mean, m.variance);
    p.k = ka.k;
    p.a = ka.a;
    p.n_total = static_cast<double>(*n_known);
  } else {
    auto m = histogram_moments(hist, 0.0);
    auto ka = fit_moments(m.mean, m.variance);
    double zero = 0.0;
    bool converged = false;
    unsigned it = 0;
    while (it < options.max_iterations) {
      ++it;
      const double n = static_cast<double>(observed) + zero;
      const double next = n * std::exp(-ka.k * std::log1p(ka.a));
      m = histogram_moments(hist, next);
      ka = fit_moments(m.mean, m.variance);
      const double delta = std::abs(next - zero);
      zero = next;
      if (delta < options.tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError("EM did not converge after " +
                             std::to_string(options.max_iterations) +
                             " iterations");
    p.k = ka.k;
    p.a = ka.a;
    p.n_total = static_cast<double>(observed) + std::round(zero);
    p.em_iterations = it;
  }
  p.a_per_incidence = p.incidence_total > 0
                          ? p.a / static_cast<double>(p.incidence_total)
                          : 0.0;
  return p;
}

double rescale_per_incidence(const NBParams& params) {
  if (params.incidence_total == 0)
    throw std::invalid_argument("cannot rescale with zero incidences");
  return params.a / static_cast<double>(params.incidence_total);
}

double rescale_for_itemset(double a_per_incidence,
                           std::uint64_t sample_incidences) {
  return a_per_incidence * static_cast<double>(sample_incidences);
}

double chi2_survival(double x, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("chi2: df must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

GofResult gof_chi2(std::span<const double> observed, const NBParams& params) {
  check_params(params.k, params.a);
  const double n = params.n_total;
  if (!(n > 0.0)) throw std::invalid_argument("gof_chi2: n_total must be positive");

  // suffix[r] = sum of observations with index >= r
  std::vector<double> suffix(observed.size() + 1, 0.0);
  for (std::size_t r = observed.size(); r-- > 0;)
    suffix[r] = suffix[r + 1] + observed[r];
  auto suffix_at = [&](std::uint64_t r) {
    return r < suffix.size() ? suffix[r] : 0.0;
  };
  auto obs_at = [&](std::uint64_t r) {
    return r < observed.size() ? observed[r] : 0.0;
  };

  GofResult res;
  const double q = params.a / (1.0 + params.a);
  double pmf = std::exp(-params.k * std::log1p(params.a));
  double cum = 0.0;
  std::uint64_t start = 0;
  double acc_e = 0.0, acc_o = 0.0;
  for (std::uint64_t r = 0;; ++r) {
    cum += pmf;
    acc_e += n * pmf;
    acc_o += obs_at(r);
    const double rest_e = n * std::max(1.0 - cum, 0.0);
    if (rest_e < kMinClassExpectation) {
      GofClass tail{start, std::nullopt, acc_o + suffix_at(r + 1), acc_e + rest_e};
      // a short tail joins the previous class
      if (tail.expected < kMinClassExpectation && !res.classes.empty()) {
        auto& prev = res.classes.back();
        prev.r_hi.reset();
        prev.observed += tail.observed;
        prev.expected += tail.expected;
      } else {
        res.classes.push_back(tail);
      }
      break;
    }
    if (acc_e >= kMinClassExpectation) {
      res.classes.push_back({start, r, acc_o, acc_e});
      start = r + 1;
      acc_e = acc_o = 0.0;
    }
    pmf *= (params.k + static_cast<double>(r)) / static_cast<double>(r + 1) * q;
  }

  res.df = static_cast<int>(res.classes.size()) - 1 - kFittedParameters;
  if (res.df <= 0)
    throw Error("goodness of fit needs at least 4 merged classes, got " +
                std::to_string(res.classes.size()));
  for (const auto& c : res.classes) {
    const double d = c.observed - c.expected;
    res.chi2 += d * d / c.expected;
  }
  res.p_value = chi2_survival(res.chi2, res.df);
  return res;
}

GofResult gof_chi2(const FreqHistogram& hist, const NBParams& params) {
  if (hist.counts.empty()) throw std::invalid_argument("gof_chi2: empty histogram");
  const auto r_max = hist.counts.rbegin()->first;
  std::vector<double> dense(r_max + 1, 0.0);
  for (auto [r, c] : hist.counts) dense[r] += static_cast<double>(c);
  dense[0] += std::max(params.n_total - static_cast<double>(hist.observed_items()), 0.0);
  return gof_chi2(std::span<const double>(dense), params);
}

double expected_frequent_items(const NBParams& params,
                               std::uint64_t sigma_freq) {
  return params.n_total * nb_tail(params.k, params.a, sigma_freq);
}

FitResult fit_database(const TransactionDatabase& db,
                       const FitOptions& options) {
  auto trimmed = trim_top(FreqHistogram::of(db), options.trim_fraction);
  std::optional<std::uint64_t> n_known;
  if (options.total_items) {
    if (*options.total_items < trimmed.trimmed)
      throw std::invalid_argument("total item count is below trimmed items");
    n_known = *options.total_items - trimmed.trimmed;
  }
  FitResult out;
  out.params = fit_em(trimmed.hist, n_known, options.em);
  out.params.incidence_total = db.incidence_total();
  out.params.transaction_count = db.transaction_count();
  out.params.trimmed_items = trimmed.trimmed;
  out.params.a_per_incidence = rescale_per_incidence(out.params);
  out.histogram = std::move(trimmed.hist);
  return out;
}

void write_model(const NBParams& p, std::ostream& out) {
  out << "k = " << format_double(p.k) << '\n'
      << "a = " << format_double(p.a) << '\n'
      << "a_per_incidence = " << format_double(p.a_per_incidence) << '\n'
      << "n_total = " << format_double(p.n_total) << '\n'
      << "incidence_total = " << p.incidence_total << '\n'
      << "transaction_count = " << p.transaction_count << '\n'
      << "em_iterations = " << p.em_iterations << '\n'
      << "trimmed_items = " << p.trimmed_items << '\n';
}

void write_model(const NBParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file " + path.string());
  write_model(params, out);
  if (!out) throw IoError("write failure on " + path.string());
}

NBParams read_model(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto get = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ParseError(std::string("model file is missing key '") + key + "'",
                       line_no);
    return it->second;
  };
  auto as_double = [&](const char* key) {
    const auto& s = get(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw ParseError(std::string("bad value for ") + key, line_no);
    return v;
  };
  auto as_uint = [&](const char* key) {
    const auto& s = get(key);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.front() == '-')
      throw ParseError(std::string("bad value for ") + key, line_no);
    return static_cast<std::uint64_t>(v);
  };

  NBParams p;
  p.k = as_double("k");
  p.a = as_double("a");
  p.a_per_incidence = as_double("a_per_incidence");
  p.n_total = as_double("n_total");
  p.incidence_total = as_uint("incidence_total");
  p.transaction_count = as_uint("transaction_count");
  p.em_iterations = static_cast<unsigned>(as_uint("em_iterations"));
  p.trimmed_items = as_uint("trimmed_items");
  check_params(p.k, p.a);
  return p;
}

NBParams read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace nbmine
