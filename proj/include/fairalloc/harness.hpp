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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairalloc/io.hpp"
#include "fairalloc/learning.hpp"
#include "fairalloc/random_model.hpp"

namespace fairalloc::harness {

enum class Mode { kOptimal, kFitted, kLearned };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);
std::string to_string(DiscoveryModel model);
DiscoveryModel parse_model(const std::string& text);

/// 0, 0.005, ..., 0.15
std::vector<double> default_alpha_grid();

struct ExperimentConfig {
  std::vector<int> budgets = {50};
  std::vector<double> alpha_grid = default_alpha_grid();
  std::vector<std::uint64_t> seeds = {1};
  int rounds = 2000;
  Mode mode = Mode::kOptimal;
  DiscoveryModel model = DiscoveryModel::kPrecision;
  double lambda_min = 0.5;
  double lambda_max = 100.0;
  int grid_points = 200;
  int jobs = 1;

  void validate() const;
};

/// Overlays the keys present in `j` onto `base`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

struct ResultRow {
  int budget = 0;
  double alpha = 0.0;
  std::optional<double> utility;
  std::optional<double> violation;
  // Fair utility over unconstrained optimal utility; empty when infeasible.
  std::optional<double> inverse_pof;
  Mode mode = Mode::kOptimal;
  std::optional<std::uint64_t> seed;
};

std::string rows_csv(const std::vector<ResultRow>& rows);
nlohmann::json rows_json(const std::vector<ResultRow>& rows);

/// Inverse price of fairness per (budget, alpha) on the given distributions.
std::vector<ResultRow> pof_sweep(const DistributionSet& set, const ExperimentConfig& config);
std::vector<ResultRow> pof_sweep_random(const RandomModelInstance& inst,
                                        const ExperimentConfig& config);

struct WorstCaseRow {
  double alpha = 0.0;
  double pof_closed_form = 0.0;
  std::optional<double> pof_bruteforce;
};

/// Closed-form PoF next to the exhaustive-search PoF on the tightness
/// instance with `groups` groups of size `budget`.
std::vector<WorstCaseRow> worst_case_sweep(int groups, int budget,
                                           const std::vector<double>& alphas);
std::string worst_case_csv(const std::vector<WorstCaseRow>& rows);

/// Utility/violation frontier. Every mode reports the chosen allocation's
/// exact utility and violation under the ground-truth distributions.
std::vector<ResultRow> pareto(const DistributionSet& truth, const ExperimentConfig& config);

struct ReferenceLine {
  std::optional<double> utility;
  std::optional<double> violation;
};

struct LearnTrace {
  LearningResult result;
  // Offline optimal-fair allocation on the ground truth.
  ReferenceLine truth_reference;
  // Offline optimal-fair allocation for the best Poisson fit, scored on the
  // ground truth.
  ReferenceLine fit_reference;
};

LearnerConfig learner_config(const ExperimentConfig& config, int budget, double alpha);

LearnTrace learn_trace(const DistributionSet& truth, const LearnerConfig& config,
                       std::uint64_t seed);

/// Long format: one row per (round, group).
std::string learn_trace_csv(const LearnTrace& trace);

/// Truncated Poisson at each distribution's mean.
std::vector<CandidateDistribution> poisson_fit(std::span<const CandidateDistribution> dists);

/// Runs `tasks` on up to `jobs` threads; results keep task order.
template <class T>
std::vector<T> run_parallel(const std::vector<std::function<T()>>& tasks, int jobs);

std::string format_double(double x);

}  // namespace fairalloc::harness

#include "fairalloc/harness_parallel.hpp"
