// Copyright 2026 The fairalloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fairalloc: fairness-constrained allocation solver and experiment driver.
//
// Exit codes: 0 success, 2 no feasible allocation, 3 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fairalloc/data_ingest.hpp"
#include "fairalloc/errors.hpp"
#include "fairalloc/harness.hpp"
#include "fairalloc/io.hpp"
#include "fairalloc/lp_relax.hpp"
#include "fairalloc/precision_solver.hpp"
#include "fairalloc/random_model.hpp"

namespace {

using namespace fairalloc;
using nlohmann::json;

constexpr int kExitOk = 0;
// Also used when the only alpha-fair allocations discover nothing while the
// unconstrained optimum does (infinite price of fairness).
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string config;
  int jobs = 1;
};

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write '{}'", g.out));
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

harness::ExperimentConfig base_config(const GlobalOptions& g) {
  harness::ExperimentConfig cfg;
  if (!g.config.empty()) cfg = harness::config_from_json(read_json_file(g.config), cfg);
  cfg.jobs = g.jobs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness-constrained allocation under candidate-distribution uncertainty"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--config", g.config, "JSON experiment config overriding defaults");
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Optimal alpha-fair allocation");
  std::string solve_dists;
  std::string solve_instance;
  int solve_budget = -1;
  double solve_alpha = 1.0;
  std::string solve_model = "precision";
  solve->add_option("--dists", solve_dists, "Distribution-set JSON (precision model)");
  solve->add_option("--instance", solve_instance, "Instance JSON (random model)");
  solve->add_option("--budget,-V", solve_budget, "Resource units (random model: overrides file)");
  solve->add_option("--alpha", solve_alpha, "Fairness tolerance in [0,1]")->capture_default_str();
  solve->add_option("--model", solve_model)
      ->check(CLI::IsMember({"precision", "random"}))
      ->capture_default_str();

  // pof
  auto* pof = app.add_subcommand("pof", "Price-of-fairness sweep");
  std::string pof_dists;
  std::string pof_instance;
  std::vector<int> pof_budgets;
  std::vector<double> pof_alphas;
  std::string pof_model = "precision";
  int pof_worst_groups = 0;
  pof->add_option("--dists", pof_dists, "Distribution-set JSON");
  pof->add_option("--instance", pof_instance, "Random-model instance JSON");
  pof->add_option("--budgets", pof_budgets, "Budgets to sweep")->delimiter(',');
  pof->add_option("--alphas", pof_alphas, "Alpha grid (default 0..0.15 step 0.005)")
      ->delimiter(',');
  pof->add_option("--model", pof_model)
      ->check(CLI::IsMember({"precision", "random"}))
      ->capture_default_str();
  pof->add_option("--worst-case-groups", pof_worst_groups,
                  "Random model: tabulate closed-form vs exhaustive PoF on the tightness "
                  "instance with this many groups (uses the first budget)");

  // pareto
  auto* par = app.add_subcommand("pareto", "Utility/fairness Pareto frontier");
  std::string par_dists;
  std::vector<int> par_budgets;
  std::vector<double> par_alphas;
  std::string par_mode;
  std::vector<std::uint64_t> par_seeds;
  int par_rounds = 0;
  double par_lmin = 0.0;
  double par_lmax = 0.0;
  par->add_option("--dists", par_dists, "Ground-truth distribution-set JSON")->required();
  par->add_option("--budgets", par_budgets)->delimiter(',');
  par->add_option("--alphas", par_alphas)->delimiter(',');
  par->add_option("--mode", par_mode)->check(CLI::IsMember({"optimal", "fitted", "learned"}));
  par->add_option("--seeds", par_seeds)->delimiter(',');
  par->add_option("--rounds,-T", par_rounds);
  par->add_option("--lambda-min", par_lmin);
  par->add_option("--lambda-max", par_lmax);

  // learn
  auto* learn = app.add_subcommand("learn", "Run the learner and emit its per-round trace");
  std::string learn_dists;
  int learn_budget = 0;
  double learn_alpha = 0.05;
  int learn_rounds = 2000;
  double learn_lmin = 0.5;
  double learn_lmax = 100.0;
  int learn_grid = 200;
  learn->add_option("--dists", learn_dists, "Ground-truth distribution-set JSON")->required();
  learn->add_option("--budget,-V", learn_budget)->required();
  learn->add_option("--alpha", learn_alpha)->capture_default_str();
  learn->add_option("--rounds,-T", learn_rounds)->capture_default_str();
  learn->add_option("--lambda-min", learn_lmin)->capture_default_str();
  learn->add_option("--lambda-max", learn_lmax)->capture_default_str();
  learn->add_option("--grid-points", learn_grid)->capture_default_str();

  // ingest
  auto* ing = app.add_subcommand("ingest", "Build per-district distributions from incident CSV");
  std::string ing_csv;
  IngestOptions ing_opts;
  std::string ing_exclude;
  std::string ing_report;
  ing->add_option("--csv", ing_csv, "Incident CSV")->required();
  ing->add_option("--date-col", ing_opts.date_column)->capture_default_str();
  ing->add_option("--district-col", ing_opts.district_column)->capture_default_str();
  ing->add_option("--exclude", ing_exclude, "Comma-separated district ids to drop");
  ing->add_option("--date-format", ing_opts.date_format, "strftime pattern (default ISO-8601)");
  ing->add_option("--max-unparseable", ing_opts.max_unparseable_fraction)->capture_default_str();
  ing->add_option("--fit-report", ing_report, "Write the per-district fit CSV here");

  // lp-relax
  auto* lp = app.add_subcommand("lp-relax", "Randomized allocation LP (budget in expectation)");
  std::string lp_dists;
  int lp_budget = 0;
  double lp_alpha = 1.0;
  std::string lp_model = "precision";
  lp->add_option("--dists", lp_dists)->required();
  lp->add_option("--budget,-V", lp_budget)->required();
  lp->add_option("--alpha", lp_alpha)->capture_default_str();
  lp->add_option("--model", lp_model)
      ->check(CLI::IsMember({"precision", "random"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const bool as_json = g.format == "json";

    if (*solve) {
      if (solve_model == "random") {
        if (solve_instance.empty()) throw InputError("--instance is required for --model random");
        auto inst = load_random_instance(solve_instance);
        if (solve_budget >= 0) inst.budget = solve_budget;
        const auto fair = optimal_fair_allocation_random(inst, solve_alpha);
        const double best = random_utility(inst, optimal_allocation_random(inst));
        if (!fair || (random_utility(inst, *fair) <= 0.0 && best > 0.0)) {
          std::cerr << "no useful alpha-fair allocation (none feasible, or all discover nothing)\n";
          return kExitInfeasible;
        }
        emit(g, dump(allocation_json(solve_alpha, *fair, random_utility(inst, *fair),
                                     random_fairness_violation(inst, *fair))));
      } else {
        if (solve_dists.empty()) throw InputError("--dists is required");
        if (solve_budget < 0) throw InputError("--budget is required");
        const auto set = load_distribution_set(solve_dists);
        const auto fair = optimal_fair_allocation(solve_alpha, set.dists, solve_budget);
        const double best = utility(optimal_allocation(set.dists, solve_budget), set.dists);
        if (!fair || (fair->utility <= 0.0 && best > 0.0)) {
          std::cerr << "no useful alpha-fair allocation (none feasible, or all discover nothing)\n";
          return kExitInfeasible;
        }
        emit(g, dump(allocation_json(solve_alpha, fair->allocation, fair->utility,
                                     fair->violation)));
      }
      return kExitOk;
    }

    if (*pof) {
      auto cfg = base_config(g);
      if (!pof_budgets.empty()) cfg.budgets = pof_budgets;
      if (!pof_alphas.empty()) cfg.alpha_grid = pof_alphas;
      if (pof_model == "random" && pof_worst_groups > 0) {
        const auto rows = harness::worst_case_sweep(pof_worst_groups, cfg.budgets.front(),
                                                    cfg.alpha_grid);
        emit(g, harness::worst_case_csv(rows));
        return kExitOk;
      }
      std::vector<harness::ResultRow> rows;
      if (pof_model == "random") {
        if (pof_instance.empty()) throw InputError("--instance is required for --model random");
        const auto inst = load_random_instance(pof_instance);
        if (pof_budgets.empty()) cfg.budgets = {inst.budget};
        rows = harness::pof_sweep_random(inst, cfg);
      } else {
        if (pof_dists.empty()) throw InputError("--dists is required");
        rows = harness::pof_sweep(load_distribution_set(pof_dists), cfg);
      }
      emit(g, as_json ? dump(harness::rows_json(rows)) : harness::rows_csv(rows));
      return kExitOk;
    }

    if (*par) {
      auto cfg = base_config(g);
      if (!par_budgets.empty()) cfg.budgets = par_budgets;
      if (!par_alphas.empty()) cfg.alpha_grid = par_alphas;
      if (!par_mode.empty()) cfg.mode = harness::parse_mode(par_mode);
      if (!par_seeds.empty()) cfg.seeds = par_seeds;
      if (par_seeds.empty() && g.config.empty()) cfg.seeds = {g.seed};
      if (par_rounds > 0) cfg.rounds = par_rounds;
      if (par_lmin > 0.0) cfg.lambda_min = par_lmin;
      if (par_lmax > 0.0) cfg.lambda_max = par_lmax;
      const auto rows = harness::pareto(load_distribution_set(par_dists), cfg);
      emit(g, as_json ? dump(harness::rows_json(rows)) : harness::rows_csv(rows));
      return kExitOk;
    }

    if (*learn) {
      const auto set = load_distribution_set(learn_dists);
      LearnerConfig lc;
      lc.budget = learn_budget;
      lc.alpha = learn_alpha;
      lc.rounds = learn_rounds;
      lc.lambda_min = learn_lmin;
      lc.lambda_max = learn_lmax;
      lc.grid_points = learn_grid;
      if (learn_budget < static_cast<int>(set.dists.size())) {
        throw InputError("--budget must be at least the number of groups");
      }
      const auto trace = harness::learn_trace(set, lc, g.seed);
      emit(g, harness::learn_trace_csv(trace));
      return kExitOk;
    }

    if (*ing) {
      if (!ing_exclude.empty()) {
        ing_opts.exclusions = CLI::detail::split(ing_exclude, ',');
      }
      const auto report = ingest_csv(std::filesystem::path(ing_csv), ing_opts);
      if (report.unparseable > 0) {
        std::cerr << fmt::format("{} of {} rows skipped as unparseable\n", report.unparseable,
                                 report.rows);
      }
      emit(g, dump(to_json(distribution_set_from_series(report.series))));
      if (!ing_report.empty()) {
        std::ofstream f(ing_report, std::ios::binary);
        if (!f) throw InputError(fmt::format("cannot write '{}'", ing_report));
        f << "district,mean,std,l1,l1_nozero,linf,linf_nozero\n";
        for (const auto& s : report.series) {
          const auto all = fit_distances(s, false);
          const auto nz = fit_distances(s, true);
          f << fmt::format("{},{},{},{},{},{},{}\n", s.district, harness::format_double(s.mean()),
                           harness::format_double(s.stddev()), harness::format_double(all.l1),
                           harness::format_double(nz.l1), harness::format_double(all.linf),
                           harness::format_double(nz.linf));
        }
      }
      return kExitOk;
    }

    if (*lp) {
      const auto set = load_distribution_set(lp_dists);
      std::vector<int> sizes;
      for (const auto& grp : set.groups) sizes.push_back(grp.size);
      const auto inst = build_lp(set.dists, harness::parse_model(lp_model), lp_alpha, lp_budget,
                                 sizes);
      emit(g, dump(to_json(solve_lp(inst))));
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
