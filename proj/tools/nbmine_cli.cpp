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


// nbmine command-line tool: fit, mine, mine-support, mine-allconf,
// generate, evaluate, benchmark.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nbmine/nbmine.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nbmine;

namespace {

using Clock = std::chrono::steady_clock;

// Collects what a run read and wrote; written next to each output file.
class RunManifest {
 public:
  RunManifest(const CLI::App& cmd) : cmd_(cmd), start_(Clock::now()) {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream ts;
    ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    started_ = ts.str();
  }

  void input(const fs::path& p) { inputs_.push_back(p.string()); }
  void output(const fs::path& p) { outputs_.push_back(p.string()); }
  void seed(std::uint64_t s) { seed_ = s; }
  void note(const std::string& key, json value) { extra_[key] = std::move(value); }

  void write() const {
    json flags = json::object();
    for (const CLI::Option* opt : cmd_.get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
      const auto& name = opt->get_lnames()[0];
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (opt->get_type_size() == 0)
          flags[name] = true;
        else
          flags[name] = res.size() == 1 ? json(res[0]) : json(res);
      } else if (!opt->get_default_str().empty()) {
        flags[name] = opt->get_default_str();
      }
    }
    json m = {{"tool", "nbmine"},
              {"version", kVersion},
              {"command", cmd_.get_name()},
              {"flags", flags},
              {"seed", seed_ ? json(*seed_) : json(nullptr)},
              {"inputs", inputs_},
              {"outputs", outputs_},
              {"started_at", started_},
              {"seconds", std::chrono::duration<double>(Clock::now() - start_).count()}};
    if (!extra_.empty()) m["results"] = extra_;
    for (const auto& out : outputs_) {
      const fs::path path = out + ".manifest.json";
      std::ofstream f(path);
      if (!f) throw IoError("cannot write manifest " + path.string());
      f << m.dump(2) << '\n';
    }
  }

 private:
  const CLI::App& cmd_;
  Clock::time_point start_;
  std::string started_;
  std::vector<std::string> inputs_, outputs_;
  std::optional<std::uint64_t> seed_;
  json extra_ = json::object();
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw IoError("cannot write " + p.string());
  return f;
}

std::string na_or(const std::optional<double>& v) {
  if (!v) return "NA";
  std::ostringstream os;
  os << std::setprecision(10) << *v;
  return os.str();
}

// ---- fit ----

struct FitArgs {
  std::string basket;
  double trim = 0.0;
  std::optional<std::uint64_t> total_items;
  std::string out;
};

void add_fit_flags(CLI::App* cmd, FitArgs& a) {
  cmd->add_option("--trim", a.trim, "Fraction of the most frequent items left out of the fit")
      ->capture_default_str();
  cmd->add_option("--total-items", a.total_items,
                  "Known number of available items; skips the zero-class estimate");
}

NBParams fit_and_report(const TransactionDatabase& db, const FitArgs& a, RunManifest& m) {
  FitOptions opt;
  opt.trim_fraction = a.trim;
  opt.total_items = a.total_items;
  auto fit = fit_database(db, opt);
  const auto& p = fit.params;
  std::cout << "transactions\t" << p.transaction_count << '\n'
            << "observed_items\t" << db.item_count() << '\n'
            << "trimmed_items\t" << p.trimmed_items << '\n'
            << "n_total\t" << p.n_total << '\n'
            << "em_iterations\t" << p.em_iterations << '\n'
            << std::setprecision(6) << "k\t" << p.k << '\n'
            << "a\t" << p.a << '\n';
  json gof;
  try {
    auto g = gof_chi2(fit.histogram, p);
    std::cout << "chi2\t" << g.chi2 << '\n'
              << "df\t" << g.df << '\n'
              << "p_value\t" << g.p_value << '\n';
    gof = {{"chi2", g.chi2}, {"df", g.df}, {"p_value", g.p_value}};
  } catch (const Error& e) {
    std::cout << "chi2\tNA\t# " << e.what() << '\n';
  }
  m.note("k", p.k);
  m.note("a", p.a);
  m.note("n_total", p.n_total);
  m.note("em_iterations", p.em_iterations);
  m.note("gof", gof);
  return p;
}

void cmd_fit(const CLI::App& cmd, const FitArgs& a) {
  RunManifest m(cmd);
  m.input(a.basket);
  auto db = load_basket(a.basket);
  auto p = fit_and_report(db, a, m);
  write_model(p, fs::path(a.out));
  m.output(a.out);
  m.write();
}

// ---- mine ----

struct MineArgs {
  std::string basket;
  std::string model;
  bool fit_inline = false;
  FitArgs fit;
  double pi = 0.95;
  double theta = 0.5;
  std::optional<std::size_t> max_size;
  std::optional<std::size_t> max_itemsets;
  std::string out;
};

void cmd_mine(const CLI::App& cmd, const MineArgs& a) {
  RunManifest m(cmd);
  m.input(a.basket);
  auto db = load_basket(a.basket);
  MinerConfig cfg;
  if (!a.model.empty()) {
    cfg.params = read_model(fs::path(a.model));
    m.input(a.model);
  } else if (a.fit_inline) {
    FitOptions opt;
    opt.trim_fraction = a.fit.trim;
    opt.total_items = a.fit.total_items;
    cfg.params = fit_database(db, opt).params;
  } else {
    throw std::invalid_argument("mine needs --model or --fit-inline");
  }
  cfg.pi = a.pi;
  cfg.theta = a.theta;
  cfg.max_size = a.max_size;
  cfg.max_itemsets = a.max_itemsets;
  auto res = nb_dfs(db, cfg);
  auto f = open_out(a.out);
  write_itemsets(res.itemsets, f);
  m.output(a.out);
  m.note("itemsets", res.itemsets.size());
  m.write();
}

// ---- baselines ----

struct LevelwiseArgs {
  std::string basket;
  double threshold = 0.0;
  std::optional<std::size_t> max_size;
  std::optional<std::size_t> max_itemsets;
  std::string out;
};

void cmd_levelwise(const CLI::App& cmd, const LevelwiseArgs& a, bool allconf) {
  RunManifest m(cmd);
  m.input(a.basket);
  auto db = load_basket(a.basket);
  LevelwiseLimits limits{a.max_size, a.max_itemsets};
  std::vector<FrequentItemset> res;
  std::ostringstream column;
  if (allconf) {
    res = mine_allconf(db, a.threshold, limits);
    column << a.threshold;
  } else {
    res = mine_frequent(db, a.threshold, limits);
    // absolute count equivalent of the support threshold
    column << static_cast<std::uint64_t>(
        std::ceil(a.threshold * static_cast<double>(db.transaction_count()) - 1e-9));
  }
  auto f = open_out(a.out);
  write_itemsets(res, column.str(), f);
  m.output(a.out);
  m.note("itemsets", res.size());
  m.write();
}

// ---- generate ----

struct GenerateArgs {
  std::string preset;
  GenConfig cfg;
  std::string out;
  std::string truth;
};

void cmd_generate(const CLI::App& cmd, GenerateArgs a) {
  RunManifest m(cmd);
  GenConfig cfg = a.cfg;
  if (!a.preset.empty()) {
    cfg = GenConfig::preset(a.preset);
    // explicit flags win over the preset
    auto set = [&](const char* name, auto& field, const auto& value) {
      if (cmd.get_option(name)->count() > 0) field = value;
    };
    set("--transactions", cfg.n_transactions, a.cfg.n_transactions);
    set("--avg-transaction-size", cfg.avg_transaction_size, a.cfg.avg_transaction_size);
    set("--items", cfg.n_items, a.cfg.n_items);
    set("--patterns", cfg.n_patterns, a.cfg.n_patterns);
    set("--avg-pattern-size", cfg.avg_pattern_size, a.cfg.avg_pattern_size);
    set("--correlation", cfg.correlation, a.cfg.correlation);
    set("--corruption", cfg.corruption, a.cfg.corruption);
    set("--seed", cfg.seed, a.cfg.seed);
  }
  auto data = generate(cfg);
  m.seed(cfg.seed);
  write_basket(data.db, fs::path(a.out));
  m.output(a.out);
  if (!a.truth.empty()) {
    write_truth(data.truth, fs::path(a.truth));
    m.output(a.truth);
  }
  m.note("config", {{"transactions", cfg.n_transactions},
                    {"avg_transaction_size", cfg.avg_transaction_size},
                    {"items", cfg.n_items},
                    {"patterns", cfg.n_patterns},
                    {"avg_pattern_size", cfg.avg_pattern_size},
                    {"correlation", cfg.correlation},
                    {"corruption", cfg.corruption},
                    {"seed", cfg.seed}});
  m.write();
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string mined;
  std::string truth;
  std::string mode = "closure";
  std::string out;
};

void cmd_evaluate(const CLI::App& cmd, const EvaluateArgs& a) {
  RunManifest m(cmd);
  const auto mode = parse_scoring_mode(a.mode);
  auto mined = read_itemsets(fs::path(a.mined));
  auto truth = read_truth(fs::path(a.truth));
  m.input(a.mined);
  m.input(a.truth);
  auto r = score(mined, truth, mode);

  std::ostringstream os;
  os << "true_positives\t" << r.true_positives << '\n'
     << "false_positives\t" << r.false_positives << '\n'
     << "positives_total\t" << r.positives_total << '\n'
     << "precision\t" << na_or(r.precision) << '\n'
     << "recall\t" << na_or(r.recall) << '\n'
     << "size\ttp\tfp\n";
  for (const auto& [size, c] : r.by_size) os << size << '\t' << c.tp << '\t' << c.fp << '\n';
  std::cout << os.str();
  if (!a.out.empty()) {
    auto f = open_out(a.out);
    f << os.str();
    m.output(a.out);
    m.write();
  }
}

// ---- benchmark ----

struct BenchmarkArgs {
  std::string basket;
  std::string truth;
  std::string preset;
  std::optional<std::uint64_t> transactions;
  std::uint64_t seed = 1;
  std::string model;
  FitArgs fit;
  std::vector<std::string> methods{"nb", "support", "allconf"};
  std::vector<double> thetas{0.5};
  std::vector<double> pi_grid = default_pi_grid();
  std::vector<double> support_grid = default_support_grid();
  std::vector<double> allconf_grid = default_allconf_grid();
  std::string mode = "closure";
  std::optional<std::size_t> max_itemsets;
  unsigned jobs = 1;
  std::string out;
};

void cmd_benchmark(const CLI::App& cmd, const BenchmarkArgs& a) {
  RunManifest m(cmd);
  TransactionDatabase db;
  GroundTruth truth;
  if (!a.preset.empty()) {
    auto cfg = GenConfig::preset(a.preset);
    if (a.transactions) cfg.n_transactions = *a.transactions;
    cfg.seed = a.seed;
    m.seed(a.seed);
    auto data = generate(cfg);
    db = std::move(data.db);
    truth = std::move(data.truth);
  } else {
    if (a.basket.empty() || a.truth.empty())
      throw std::invalid_argument("benchmark needs --preset or both --basket and --truth");
    db = load_basket(a.basket);
    truth = read_truth(fs::path(a.truth));
    m.input(a.basket);
    m.input(a.truth);
  }

  SweepOptions opt;
  opt.mode = parse_scoring_mode(a.mode);
  opt.max_itemsets = a.max_itemsets;
  opt.jobs = a.jobs;
  std::vector<SweepSpec> specs;
  for (const auto& method : a.methods) {
    if (method == "nb") {
      for (double theta : a.thetas) specs.push_back({Method::kNbFrequent, theta, a.pi_grid});
    } else if (method == "support") {
      specs.push_back({Method::kMinSupport, 0.0, a.support_grid});
    } else if (method == "allconf") {
      specs.push_back({Method::kAllConfidence, 0.0, a.allconf_grid});
    } else {
      throw std::invalid_argument("unknown method '" + method +
                                  "' (expected nb, support or allconf)");
    }
  }
  const bool needs_model = std::any_of(specs.begin(), specs.end(), [](const SweepSpec& s) {
    return s.method == Method::kNbFrequent;
  });
  if (needs_model) {
    if (!a.model.empty()) {
      opt.params = read_model(fs::path(a.model));
      m.input(a.model);
    } else {
      FitOptions fo;
      fo.trim_fraction = a.fit.trim;
      fo.total_items = a.fit.total_items;
      opt.params = fit_database(db, fo).params;
    }
  }

  auto res = sweep(db, truth, specs, opt);
  auto f = open_out(a.out);
  write_sweep_table(res, f);
  std::size_t failed = 0;
  for (const auto& e : res.entries) {
    if (e.error.empty()) continue;
    ++failed;
    std::cerr << "warning: " << e.method << " at " << e.parameter << ": " << e.error << '\n';
  }
  m.output(a.out);
  m.note("runs", res.entries.size());
  m.note("failed_runs", failed);
  m.write();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-based frequent itemset mining with a negative binomial baseline"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the NB model to a basket file");
  fit_cmd->add_option("basket", fit.basket, "Basket file")->required();
  add_fit_flags(fit_cmd, fit);
  fit_cmd->add_option("--out", fit.out, "Model file to write")->required();

  MineArgs mine;
  auto* mine_cmd = app.add_subcommand("mine", "Mine NB-frequent itemsets");
  mine_cmd->add_option("basket", mine.basket, "Basket file")->required();
  auto* model_opt = mine_cmd->add_option("--model", mine.model, "Model file from 'fit'");
  auto* inline_opt =
      mine_cmd->add_flag("--fit-inline", mine.fit_inline, "Fit the model on the basket first");
  model_opt->excludes(inline_opt);
  add_fit_flags(mine_cmd, mine.fit);
  mine_cmd->add_option("--pi", mine.pi, "Precision threshold")->capture_default_str();
  mine_cmd->add_option("--theta", mine.theta, "Required fraction of generating subsets")
      ->capture_default_str();
  mine_cmd->add_option("--max-size", mine.max_size, "Do not extend itemsets of this size");
  mine_cmd->add_option("--max-itemsets", mine.max_itemsets, "Abort past this many itemsets");
  mine_cmd->add_option("--out", mine.out, "Itemset file to write")->required();

  LevelwiseArgs sup, ac;
  auto* sup_cmd = app.add_subcommand("mine-support", "Mine itemsets by minimum support");
  auto* ac_cmd = app.add_subcommand("mine-allconf", "Mine itemsets by all-confidence");
  for (auto [cmd, args, name] : {std::tuple{sup_cmd, &sup, "--sigma"},
                                 std::tuple{ac_cmd, &ac, "--gamma"}}) {
    cmd->add_option("basket", args->basket, "Basket file")->required();
    cmd->add_option(name, args->threshold, "Threshold")->required();
    cmd->add_option("--max-size", args->max_size, "Largest itemset size");
    cmd->add_option("--max-itemsets", args->max_itemsets, "Abort past this many itemsets");
    cmd->add_option("--out", args->out, "Itemset file to write")->required();
  }

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Generate synthetic baskets with ground truth");
  gen_cmd->add_option("--preset", gen.preset, "Named setup")
      ->check(CLI::IsMember({"artif-1", "artif-2"}));
  gen_cmd->add_option("--transactions", gen.cfg.n_transactions, "Number of transactions")
      ->capture_default_str();
  gen_cmd->add_option("--avg-transaction-size", gen.cfg.avg_transaction_size,
                      "Average transaction size")
      ->capture_default_str();
  gen_cmd->add_option("--items", gen.cfg.n_items, "Number of items")->capture_default_str();
  gen_cmd->add_option("--patterns", gen.cfg.n_patterns, "Number of patterns")
      ->capture_default_str();
  gen_cmd->add_option("--avg-pattern-size", gen.cfg.avg_pattern_size, "Average pattern size")
      ->capture_default_str();
  gen_cmd->add_option("--correlation", gen.cfg.correlation, "Pattern overlap")
      ->capture_default_str();
  gen_cmd->add_option("--corruption", gen.cfg.corruption, "Pattern corruption level")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.cfg.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Basket file to write")->required();
  gen_cmd->add_option("--truth", gen.truth, "Ground-truth file to write");

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score mined itemsets against ground truth");
  ev_cmd->add_option("--mined", ev.mined, "Itemset file")->required();
  ev_cmd->add_option("--truth", ev.truth, "Ground-truth file")->required();
  ev_cmd->add_option("--scoring-mode", ev.mode, "closure or patterns")
      ->check(CLI::IsMember({"closure", "patterns"}))
      ->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "Also write the report here");

  BenchmarkArgs bm;
  auto* bm_cmd = app.add_subcommand("benchmark", "Precision/recall sweep over parameter grids");
  auto* bm_basket = bm_cmd->add_option("--basket", bm.basket, "Basket file");
  bm_cmd->add_option("--truth", bm.truth, "Ground-truth file");
  auto* bm_preset = bm_cmd->add_option("--preset", bm.preset, "Generate the data from a preset")
                        ->check(CLI::IsMember({"artif-1", "artif-2"}));
  bm_preset->excludes(bm_basket);
  bm_cmd->add_option("--transactions", bm.transactions, "Transactions for --preset");
  bm_cmd->add_option("--seed", bm.seed, "Seed for --preset")->capture_default_str();
  bm_cmd->add_option("--model", bm.model, "Model file; fitted on the data when absent");
  add_fit_flags(bm_cmd, bm.fit);
  bm_cmd->add_option("--methods", bm.methods, "nb, support, allconf")
      ->delimiter(',')
      ->capture_default_str();
  bm_cmd->add_option("--thetas", bm.thetas, "theta values for nb")
      ->delimiter(',')
      ->capture_default_str();
  bm_cmd->add_option("--pi-grid", bm.pi_grid, "pi values")->delimiter(',')->capture_default_str();
  bm_cmd->add_option("--support-grid", bm.support_grid, "minimum support values")
      ->delimiter(',')
      ->capture_default_str();
  bm_cmd->add_option("--allconf-grid", bm.allconf_grid, "all-confidence values")
      ->delimiter(',')
      ->capture_default_str();
  bm_cmd->add_option("--scoring-mode", bm.mode, "closure or patterns")
      ->check(CLI::IsMember({"closure", "patterns"}))
      ->capture_default_str();
  bm_cmd->add_option("--max-itemsets", bm.max_itemsets, "Abort runs past this many itemsets");
  bm_cmd->add_option("--jobs", bm.jobs, "Grid points run in parallel")->capture_default_str();
  bm_cmd->add_option("--out", bm.out, "Sweep table to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) cmd_fit(*fit_cmd, fit);
    if (*mine_cmd) cmd_mine(*mine_cmd, mine);
    if (*sup_cmd) cmd_levelwise(*sup_cmd, sup, false);
    if (*ac_cmd) cmd_levelwise(*ac_cmd, ac, true);
    if (*gen_cmd) cmd_generate(*gen_cmd, gen);
    if (*ev_cmd) cmd_evaluate(*ev_cmd, ev);
    if (*bm_cmd) cmd_benchmark(*bm_cmd, bm);
  } catch (const std::exception& e) {
    std::cerr << "nbmine: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
