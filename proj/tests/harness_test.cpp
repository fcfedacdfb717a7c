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

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "fairalloc/errors.hpp"
#include "fairalloc/harness_parallel.hpp"

using namespace fairalloc;
using namespace fairalloc::harness;
using doctest::Approx;

namespace {

const std::filesystem::path kFixtures = FAIRALLOC_FIXTURES;

DistributionSet poisson_set(std::initializer_list<double> lambdas) {
  DistributionSet set;
  int k = 0;
  for (double l : lambdas) {
    set.groups.push_back(Group{std::to_string(++k), 1});
    set.dists.push_back(poisson_truncate({l, 1e-12}));
  }
  return set;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("default alpha grid") {
  const auto grid = default_alpha_grid();
  REQUIRE(grid.size() == 31);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == Approx(0.15));
}

TEST_CASE("config parsing and validation") {
  const auto cfg = config_from_json(nlohmann::json::parse(
      R"({"budgets":[10,20],"alpha_grid":[0,0.1],"seeds":[4],"rounds":7,"mode":"fitted"})"));
  CHECK(cfg.budgets == std::vector<int>{10, 20});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4});
  CHECK(cfg.rounds == 7);
  CHECK(cfg.mode == Mode::kFitted);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"budgets":"x"})")), InputError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"mode":"bogus"})")),
                  InvalidArgument);

  ExperimentConfig bad;
  bad.alpha_grid = {0.2, 0.1};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = ExperimentConfig{};
  bad.budgets.clear();
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("pof sweep") {
  const auto set = load_distribution_set(kFixtures / "three_groups.json");
  ExperimentConfig cfg;
  cfg.budgets = {4, 8};
  cfg.alpha_grid = {0.0, 0.05, 0.1, 0.2, 0.5, 1.0};
  cfg.jobs = 3;
  const auto rows = pof_sweep(set, cfg);
  REQUIRE(rows.size() == 12);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.inverse_pof) {
      CHECK(*r.inverse_pof >= 0.0);
      CHECK(*r.inverse_pof <= 1.0);
      CHECK(*r.violation <= r.alpha + 1e-12);
    }
    if (r.alpha == 1.0) CHECK(r.inverse_pof == Approx(1.0));
    if (k > 0 && rows[k - 1].budget == r.budget && r.inverse_pof && rows[k - 1].inverse_pof) {
      CHECK(*r.inverse_pof >= *rows[k - 1].inverse_pof - 1e-12);
    }
  }
  cfg.jobs = 1;
  CHECK(rows_csv(pof_sweep(set, cfg)) == rows_csv(rows));
}

TEST_CASE("csv schema") {
  std::vector<ResultRow> rows(1);
  rows[0].budget = 5;
  rows[0].alpha = 0.1;
  rows[0].utility = 2.5;
  const auto csv = rows_csv(rows);
  CHECK(csv == "budget,alpha,utility,violation,inverse_pof,mode,seed\n5,0.1,2.5,,,optimal,\n");
  const auto j = rows_json(rows);
  CHECK(j[0].at("violation").is_null());

  const auto wc = worst_case_sweep(2, 10, {0.0, 1.0});
  CHECK(worst_case_csv(wc) == "alpha,pof_closed_form,pof_bruteforce\n0,2,2\n1,1,1\n");
}

TEST_CASE("random-model sweep") {
  RandomModelInstance inst = load_random_instance(kFixtures / "random_instance.json");
  ExperimentConfig cfg;
  cfg.budgets = {5};
  cfg.alpha_grid = {0.0, 1.0};
  const auto rows = pof_sweep_random(inst, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].utility == Approx(2.9));
}

TEST_CASE("pareto modes") {
  const auto truth = poisson_set({2.0, 4.0, 6.0});
  ExperimentConfig cfg;
  cfg.budgets = {12};
  cfg.alpha_grid = {0.0, 0.05, 0.1, 0.3};
  const auto optimal = pareto(truth, cfg);
  for (const auto& r : optimal) {
    if (r.violation) CHECK(*r.violation <= r.alpha + 1e-12);
  }
  cfg.mode = Mode::kFitted;
  const auto fitted = pareto(truth, cfg);
  REQUIRE(fitted.size() == optimal.size());
  for (std::size_t k = 0; k < fitted.size(); ++k) {
    REQUIRE(fitted[k].utility.has_value() == optimal[k].utility.has_value());
    if (fitted[k].utility) CHECK(std::abs(*fitted[k].utility - *optimal[k].utility) <= 1e-9);
  }

  cfg.mode = Mode::kLearned;
  cfg.seeds = {1, 2};
  cfg.rounds = 30;
  cfg.jobs = 4;
  const auto learned = pareto(truth, cfg);
  CHECK(learned.size() == 8);
  for (const auto& r : learned) CHECK(r.seed.has_value());
  cfg.jobs = 1;
  CHECK(rows_csv(pareto(truth, cfg)) == rows_csv(learned));

  cfg.model = DiscoveryModel::kRandom;
  CHECK_THROWS_AS(pareto(truth, cfg), InvalidArgument);
}

TEST_CASE("learn trace") {
  const auto truth = poisson_set({2.0, 5.0});
  LearnerConfig cfg;
  cfg.budget = 10;
  cfg.alpha = 0.1;
  cfg.rounds = 25;
  const auto trace = learn_trace(truth, cfg, 9);
  const auto csv = learn_trace_csv(trace);
  CHECK(count_lines(csv) == 1 + 25 * 2);
  CHECK(csv.rfind(
            "round,group,allocated,discovered,censored,lambda_hat,true_utility,true_violation,"
            "ref_true_utility,ref_true_violation,ref_fit_utility,ref_fit_violation\n",
            0) == 0);
  // Reference columns are constant across rows.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::set<std::string> tails;
  while (std::getline(in, line)) {
    std::size_t pos = 0;
    for (int comma = 0; comma < 8; ++comma) pos = line.find(',', pos) + 1;
    tails.insert(line.substr(pos));
  }
  CHECK(tails.size() == 1);
  REQUIRE(trace.truth_reference.utility.has_value());
  REQUIRE(trace.fit_reference.utility.has_value());
  CHECK(*trace.fit_reference.utility <= *trace.truth_reference.utility + 1e-9);
  CHECK(learn_trace_csv(learn_trace(truth, cfg, 9)) == csv);
}

TEST_CASE("run_parallel keeps task order") {
  std::vector<std::function<int()>> tasks;
  for (int k = 0; k < 50; ++k) tasks.emplace_back([k] { return k * k; });
  const auto out = run_parallel(tasks, 8);
  REQUIRE(out.size() == 50);
  for (int k = 0; k < 50; ++k) CHECK(out[static_cast<std::size_t>(k)] == k * k);
}

TEST_CASE("mode and model names") {
  for (auto m : {Mode::kOptimal, Mode::kFitted, Mode::kLearned}) CHECK(parse_mode(to_string(m)) == m);
  CHECK(parse_model("random") == DiscoveryModel::kRandom);
  CHECK_THROWS_AS(parse_model("exact"), InvalidArgument);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333");
}
