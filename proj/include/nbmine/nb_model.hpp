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

// Negative binomial (Gamma-mixed Poisson) baseline for item occurrence
// counts.
//
// Parameterization: shape k, scale a, with
//   Pr[R = r] = (1+a)^-k * Gamma(k+r) / (Gamma(r+1) Gamma(k)) * (a/(1+a))^r
// so that E[R] = a k and Var[R] = a k (1 + a).

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nbmine/transactions.hpp"

namespace nbmine {

struct NBParams {
  double k = 0.0;
  double a = 0.0;
  /// a / incidence_total
  double a_per_incidence = 0.0;
  /// Observed (untrimmed) items plus the estimated zero-class.
  double n_total = 0.0;
  std::uint64_t incidence_total = 0;
  std::uint64_t transaction_count = 0;
  unsigned em_iterations = 0;
  std::uint64_t trimmed_items = 0;

  friend bool operator==(const NBParams&, const NBParams&) = default;
};

/// Number of items observed with each frequency r.
struct FreqHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t observed_items() const;
  /// Sum of r * count.
  std::uint64_t incidences() const;
  std::size_t classes() const { return counts.size(); }

  static FreqHistogram of(const TransactionDatabase& db);
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and unbiased sample variance of the histogram with `zero_class`
/// additional items of frequency 0 (may be fractional).
Moments histogram_moments(const FreqHistogram& hist, double zero_class = 0.0);

struct ShapeScale {
  double k = 0.0;
  double a = 0.0;
};

double nb_log_pmf(double k, double a, std::uint64_t r);

/// Direct evaluation through log-gamma.
double nb_pmf(double k, double a, std::uint64_t r);

/// Pr[R = r] for r = 0..r_max by the two-term recursion.
std::vector<double> nb_pmf_prefix(double k, double a, std::uint64_t r_max);

/// Pr[R >= rho], clamped to [0, 1].
double nb_tail(double k, double a, std::uint64_t rho);

/// Pr[R >= rho] for rho = 0..r_max + 1 from one recursion pass.
std::vector<double> nb_tail_table(double k, double a, std::uint64_t r_max);

/// Method of moments. Throws UnderdispersionError unless variance > mean > 0.
ShapeScale fit_moments(double mean, double variance);

struct TrimResult {
  FreqHistogram hist;
  std::uint64_t trimmed = 0;
};

/// Drops ceil(fraction * observed_items) items from the top frequency
/// classes down.
TrimResult trim_top(const FreqHistogram& hist, double fraction);

struct EmOptions {
  unsigned max_iterations = 1000;
  /// Stop once the zero-class estimate moves by less than this many items.
  double tolerance = 0.5;
};

/// Fits (k, a) and the zero-class. With `n_known`, the zero-class is
/// n_known - observed and one moments pass is done (em_iterations = 0).
/// The returned incidence_total is the histogram's own incidence sum;
/// fit_database() replaces it with the database's.
NBParams fit_em(const FreqHistogram& hist,
                std::optional<std::uint64_t> n_known = std::nullopt,
                const EmOptions& options = {});

double rescale_per_incidence(const NBParams& params);
double rescale_for_itemset(double a_per_incidence,
                           std::uint64_t sample_incidences);

struct GofClass {
  std::uint64_t r_lo = 0;
  /// Inclusive upper bound; empty for the final open-ended class.
  std::optional<std::uint64_t> r_hi;
  double observed = 0.0;
  double expected = 0.0;
};

struct GofResult {
  double chi2 = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<GofClass> classes;
};

/// Chi-square goodness of fit with classes merged until every expectation
/// is at least 5. The zero-class observation is n_total - observed items.
GofResult gof_chi2(const FreqHistogram& hist, const NBParams& params);

/// Same test for real-valued observations indexed by r (index 0 is the
/// zero-class). Observations beyond the vector are taken as 0.
GofResult gof_chi2(std::span<const double> observed, const NBParams& params);

/// Upper tail of the chi-square distribution.
double chi2_survival(double x, double df);

/// n_total * Pr[R >= sigma_freq]
double expected_frequent_items(const NBParams& params,
                               std::uint64_t sigma_freq);

struct FitOptions {
  double trim_fraction = 0.0;
  /// Total number of available items, when known.
  std::optional<std::uint64_t> total_items;
  EmOptions em;
};

struct FitResult {
  NBParams params;
  FreqHistogram histogram;  // after trimming
};

/// Histogram, trim, and EM fit of a database. a_per_incidence uses the
/// incidence total of the whole database.
FitResult fit_database(const TransactionDatabase& db,
                       const FitOptions& options = {});

void write_model(const NBParams& params, std::ostream& out);
void write_model(const NBParams& params, const std::filesystem::path& path);
NBParams read_model(std::istream& in);
NBParams read_model(const std::filesystem::path& path);

}  // namespace nbmine
