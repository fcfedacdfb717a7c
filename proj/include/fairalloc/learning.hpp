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

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fairalloc/distributions.hpp"
#include "fairalloc/precision_solver.hpp"
#include "fairalloc/rng.hpp"

namespace fairalloc {

/// One round of feedback for one group. Under the precision model the
/// allocator sees min(v, c); an observation equal to the allocation only says
/// that at least v candidates were present.
struct Observation {
  int allocated = 0;
  int discovered = 0;

  Observation() = default;
  Observation(int allocated_units, int discovered_count);

  bool censored() const { return discovered == allocated; }
};

/// Per-group summary sufficient for the censored Poisson likelihood.
struct GroupStats {
  long uncensored = 0;
  double sum_observed = 0.0;
  double sum_log_factorial = 0.0;
  // allocation level -> number of censored observations at that level
  std::map<int, long> censored;

  void add(const Observation& obs);
  long count() const;
};

/// Full feedback record, one sequence per group.
class History {
 public:
  explicit History(std::size_t groups) : per_group_(groups) {}

  void record(std::span<const Observation> round);
  std::size_t groups() const { return per_group_.size(); }
  std::size_t rounds() const { return per_group_.empty() ? 0 : per_group_[0].size(); }
  std::span<const Observation> group(std::size_t i) const { return per_group_[i]; }
  GroupStats stats(std::size_t i) const;

 private:
  std::vector<std::vector<Observation>> per_group_;
};

struct LearnerConfig {
  double lambda_min = 0.5;
  double lambda_max = 100.0;
  double alpha = 0.05;
  int budget = 100;
  int rounds = 2000;
  int grid_points = 200;
  double refine_tol = 1e-4;
  double truncation_tol = 1e-12;

  void validate() const;
};

/// Log-likelihood of lambda given one group's observations:
/// sum over uncensored o of (-lambda + o log lambda - log o!) plus sum over
/// censored v of log P(C >= v).
double censored_loglik(const GroupStats& stats, double lambda);
double censored_loglik(std::span<const Observation> obs, double lambda);

/// Maximizer of censored_loglik over [lambda_min, lambda_max]: a uniform grid
/// of grid_points, then golden-section search inside the cells adjacent to
/// the best grid point. Grid ties resolve toward the smaller rate.
double mle(const GroupStats& stats, const LearnerConfig& config);

/// Source of per-round feedback for the learner.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t groups() const = 0;
  virtual std::vector<Observation> step(const Allocation& alloc, Rng& rng) = 0;
};

/// Draws candidate counts from fixed distributions and reports
/// min(allocated, drawn) per group.
class DistributionEnvironment : public Environment {
 public:
  explicit DistributionEnvironment(std::vector<CandidateDistribution> truth);

  std::size_t groups() const override { return truth_.size(); }
  std::vector<Observation> step(const Allocation& alloc, Rng& rng) override;
  std::span<const CandidateDistribution> truth() const { return truth_; }

 private:
  std::vector<CandidateDistribution> truth_;
};

struct RoundRecord {
  int round = 0;
  // Allocation actually deployed this round.
  std::vector<int> allocation;
  std::vector<Observation> observations;
  // Estimates after this round's observations.
  std::vector<double> estimates;
  // The proposal had a zero entry and the previous deployment was reused.
  bool reused_previous = false;
  // The fair solver found nothing feasible on the estimates; the next round
  // repeats this round's deployment.
  bool solver_infeasible = false;
  std::optional<double> true_utility;
  std::optional<double> true_violation;
};

struct LearningResult {
  Allocation final_allocation;
  std::vector<double> estimates;
  std::vector<RoundRecord> trace;
};

/// Truncated Poisson(lambda_i) for every estimate.
std::vector<CandidateDistribution> poisson_models(std::span<const double> lambdas,
                                                  double truncation_tol = 1e-12);

/// The censored-feedback learning loop. Starts from the uniform split
/// floor(V/G), then every round observes, re-estimates each rate by maximum
/// likelihood and deploys the optimal alpha-fair allocation for the
/// estimated Poisson models. `truth`, when given, is only used to fill the
/// trace's true utility/violation columns.
LearningResult run_learning(Environment& env, const LearnerConfig& config, Rng& rng,
                            std::optional<std::span<const CandidateDistribution>> truth =
                                std::nullopt);

}  // namespace fairalloc
