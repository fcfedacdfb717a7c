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

#include "fairalloc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "fairalloc/bruteforce_oracle.hpp"
#include "fairalloc/errors.hpp"

namespace fairalloc::harness {

using nlohmann::json;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kOptimal:
      return "optimal";
    case Mode::kFitted:
      return "fitted";
    case Mode::kLearned:
      return "learned";
  }
  return "optimal";
}

Mode parse_mode(const std::string& text) {
  if (text == "optimal") return Mode::kOptimal;
  if (text == "fitted") return Mode::kFitted;
  if (text == "learned") return Mode::kLearned;
  throw InvalidArgument(fmt::format("unknown mode '{}'", text));
}

std::string to_string(DiscoveryModel model) {
  return model == DiscoveryModel::kPrecision ? "precision" : "random";
}

DiscoveryModel parse_model(const std::string& text) {
  if (text == "precision") return DiscoveryModel::kPrecision;
  if (text == "random") return DiscoveryModel::kRandom;
  throw InvalidArgument(fmt::format("unknown model '{}'", text));
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 30; ++k) grid.push_back(k * 0.005);
  return grid;
}

void ExperimentConfig::validate() const {
  if (budgets.empty() || alpha_grid.empty() || seeds.empty()) {
    throw InvalidArgument("budgets, alpha grid and seeds must be non-empty");
  }
  for (int v : budgets) {
    if (v < 0) throw InvalidArgument("budgets must be >= 0");
  }
  for (double a : alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument(fmt::format("alpha {} outside [0, 1]", a));
  }
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) {
    throw InvalidArgument("alpha grid must be sorted ascending");
  }
  if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig base) {
  try {
    if (j.contains("budgets")) base.budgets = j.at("budgets").get<std::vector<int>>();
    if (j.contains("alpha_grid")) base.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    if (j.contains("seeds")) base.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("rounds")) base.rounds = j.at("rounds").get<int>();
    if (j.contains("mode")) base.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("model")) base.model = parse_model(j.at("model").get<std::string>());
    if (j.contains("lambda_min")) base.lambda_min = j.at("lambda_min").get<double>();
    if (j.contains("lambda_max")) base.lambda_max = j.at("lambda_max").get<double>();
    if (j.contains("grid_points")) base.grid_points = j.at("grid_points").get<int>();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed experiment config: {}", e.what()));
  }
  return base;
}

std::string format_double(double x) { return fmt::format("{:.10g}", x); }

namespace {

std::string opt_field(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(a.budget, a.alpha, a.seed.value_or(0)) <
           std::make_tuple(b.budget, b.alpha, b.seed.value_or(0));
  });
}

std::optional<double> ratio(double fair, double best) {
  if (best <= 0.0) return 1.0;
  return std::clamp(fair / best, 0.0, 1.0);
}

}  // namespace

std::string rows_csv(const std::vector<ResultRow>& rows) {
  std::string out = "budget,alpha,utility,violation,inverse_pof,mode,seed\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.budget, format_double(r.alpha),
                       opt_field(r.utility), opt_field(r.violation), opt_field(r.inverse_pof),
                       to_string(r.mode), r.seed ? std::to_string(*r.seed) : "");
  }
  return out;
}

json rows_json(const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"budget", r.budget},
                   {"alpha", r.alpha},
                   {"utility", opt_json(r.utility)},
                   {"violation", opt_json(r.violation)},
                   {"inverse_pof", opt_json(r.inverse_pof)},
                   {"mode", to_string(r.mode)},
                   {"seed", r.seed ? json(*r.seed) : json(nullptr)}});
  }
  return arr;
}

std::vector<CandidateDistribution> poisson_fit(std::span<const CandidateDistribution> dists) {
  std::vector<double> lambdas;
  for (const auto& d : dists) {
    const double m = d.mean();
    if (!(m > 0.0)) throw InvalidArgument("cannot fit a Poisson to a zero-mean distribution");
    lambdas.push_back(m);
  }
  return poisson_models(lambdas);
}

std::vector<ResultRow> pof_sweep(const DistributionSet& set, const ExperimentConfig& config) {
  config.validate();
  std::vector<std::function<ResultRow()>> tasks;
  for (int budget : config.budgets) {
    for (double alpha : config.alpha_grid) {
      tasks.emplace_back([&set, budget, alpha] {
        const double best = utility(optimal_allocation(set.dists, budget), set.dists);
        ResultRow row;
        row.budget = budget;
        row.alpha = alpha;
        if (const auto fair = optimal_fair_allocation(alpha, set.dists, budget)) {
          row.utility = fair->utility;
          row.violation = fair->violation;
          row.inverse_pof = ratio(fair->utility, best);
        }
        return row;
      });
    }
  }
  auto rows = run_parallel(tasks, config.jobs);
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> pof_sweep_random(const RandomModelInstance& base,
                                        const ExperimentConfig& config) {
  config.validate();
  std::vector<std::function<ResultRow()>> tasks;
  for (int budget : config.budgets) {
    for (double alpha : config.alpha_grid) {
      tasks.emplace_back([&base, budget, alpha] {
        RandomModelInstance inst = base;
        inst.budget = budget;
        const double best = random_utility(inst, optimal_allocation_random(inst));
        ResultRow row;
        row.budget = budget;
        row.alpha = alpha;
        if (const auto fair = optimal_fair_allocation_random(inst, alpha)) {
          const double u = random_utility(inst, *fair);
          row.utility = u;
          row.violation = random_fairness_violation(inst, *fair);
          row.inverse_pof = ratio(u, best);
        }
        return row;
      });
    }
  }
  auto rows = run_parallel(tasks, config.jobs);
  sort_rows(rows);
  return rows;
}

std::vector<WorstCaseRow> worst_case_sweep(int groups, int budget,
                                           const std::vector<double>& alphas) {
  std::vector<WorstCaseRow> rows;
  for (double alpha : alphas) {
    const auto inst = worst_case_instance(groups, budget, alpha);
    WorstCaseRow row;
    row.alpha = alpha;
    row.pof_closed_form = pof_closed_form(budget, inst.total_size(), budget, alpha);
    const auto best = oracle::enumerate_optimal_random(inst, std::nullopt);
    const auto fair = oracle::enumerate_optimal_random(inst, alpha);
    if (best && fair && fair->utility > 0.0) row.pof_bruteforce = best->utility / fair->utility;
    rows.push_back(row);
  }
  return rows;
}

std::string worst_case_csv(const std::vector<WorstCaseRow>& rows) {
  std::string out = "alpha,pof_closed_form,pof_bruteforce\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", format_double(r.alpha), format_double(r.pof_closed_form),
                       opt_field(r.pof_bruteforce));
  }
  return out;
}

LearnerConfig learner_config(const ExperimentConfig& config, int budget, double alpha) {
  LearnerConfig lc;
  lc.lambda_min = config.lambda_min;
  lc.lambda_max = config.lambda_max;
  lc.alpha = alpha;
  lc.budget = budget;
  lc.rounds = config.rounds;
  lc.grid_points = config.grid_points;
  return lc;
}

std::vector<ResultRow> pareto(const DistributionSet& truth, const ExperimentConfig& config) {
  config.validate();
  if (config.model != DiscoveryModel::kPrecision) {
    throw InvalidArgument("Pareto frontiers are computed for the precision model");
  }
  const auto fitted = config.mode == Mode::kFitted ? poisson_fit(truth.dists)
                                                   : std::vector<CandidateDistribution>{};
  std::vector<std::function<ResultRow()>> tasks;
  for (int budget : config.budgets) {
    for (double alpha : config.alpha_grid) {
      auto evaluate = [&truth, budget, alpha, mode = config.mode](
                          const std::optional<Allocation>& alloc,
                          std::optional<std::uint64_t> seed) {
        ResultRow row;
        row.budget = budget;
        row.alpha = alpha;
        row.mode = mode;
        row.seed = seed;
        if (alloc) {
          const double best = utility(optimal_allocation(truth.dists, budget), truth.dists);
          const double u = utility(*alloc, truth.dists);
          row.utility = u;
          row.violation = fairness_violation(*alloc, truth.dists);
          row.inverse_pof = ratio(u, best);
        }
        return row;
      };
      if (config.mode == Mode::kLearned) {
        for (std::uint64_t seed : config.seeds) {
          tasks.emplace_back([&truth, &config, budget, alpha, seed, evaluate] {
            DistributionEnvironment env(truth.dists);
            Rng rng(seed);
            const auto res = run_learning(env, learner_config(config, budget, alpha), rng);
            return evaluate(res.final_allocation, seed);
          });
        }
      } else {
        const auto& model = config.mode == Mode::kFitted ? fitted : truth.dists;
        tasks.emplace_back([&model, budget, alpha, evaluate] {
          const auto fair = optimal_fair_allocation(alpha, model, budget);
          return evaluate(fair ? std::optional<Allocation>(fair->allocation) : std::nullopt,
                          std::nullopt);
        });
      }
    }
  }
  auto rows = run_parallel(tasks, config.jobs);
  sort_rows(rows);
  return rows;
}

LearnTrace learn_trace(const DistributionSet& truth, const LearnerConfig& config,
                       std::uint64_t seed) {
  LearnTrace trace;
  DistributionEnvironment env(truth.dists);
  Rng rng(seed);
  trace.result = run_learning(env, config, rng, std::span<const CandidateDistribution>(truth.dists));

  if (const auto ref = optimal_fair_allocation(config.alpha, truth.dists, config.budget)) {
    trace.truth_reference = {ref->utility, ref->violation};
  }
  const auto fitted = poisson_fit(truth.dists);
  if (const auto ref = optimal_fair_allocation(config.alpha, fitted, config.budget)) {
    trace.fit_reference = {utility(ref->allocation, truth.dists),
                           fairness_violation(ref->allocation, truth.dists)};
  }
  return trace;
}

std::string learn_trace_csv(const LearnTrace& trace) {
  std::string out =
      "round,group,allocated,discovered,censored,lambda_hat,true_utility,true_violation,"
      "ref_true_utility,ref_true_violation,ref_fit_utility,ref_fit_violation\n";
  const auto& t = trace;
  for (const auto& rec : trace.result.trace) {
    for (std::size_t g = 0; g < rec.allocation.size(); ++g) {
      const auto& obs = rec.observations[g];
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", rec.round, g, rec.allocation[g],
                         obs.discovered, obs.censored() ? 1 : 0, format_double(rec.estimates[g]),
                         opt_field(rec.true_utility), opt_field(rec.true_violation),
                         opt_field(t.truth_reference.utility),
                         opt_field(t.truth_reference.violation),
                         opt_field(t.fit_reference.utility), opt_field(t.fit_reference.violation));
    }
  }
  return out;
}

}  // namespace fairalloc::harness
