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

#include "fairalloc/learning.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

Observation::Observation(int allocated_units, int discovered_count)
    : allocated(allocated_units), discovered(discovered_count) {
  if (allocated < 0 || discovered < 0 || discovered > allocated) {
    throw InvalidArgument(fmt::format("observation needs 0 <= discovered <= allocated, got {}/{}",
                                      discovered, allocated));
  }
}

void GroupStats::add(const Observation& obs) {
  if (obs.censored()) {
    ++censored[obs.allocated];
  } else {
    ++uncensored;
    sum_observed += obs.discovered;
    sum_log_factorial += std::lgamma(obs.discovered + 1.0);
  }
}

long GroupStats::count() const {
  long n = uncensored;
  for (const auto& [v, k] : censored) n += k;
  return n;
}

void History::record(std::span<const Observation> round) {
  if (round.size() != per_group_.size()) {
    throw InvalidArgument(fmt::format("round has {} observations for {} groups", round.size(),
                                      per_group_.size()));
  }
  for (std::size_t i = 0; i < round.size(); ++i) per_group_[i].push_back(round[i]);
}

GroupStats History::stats(std::size_t i) const {
  GroupStats s;
  for (const auto& obs : per_group_[i]) s.add(obs);
  return s;
}

void LearnerConfig::validate() const {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min)) {
    throw InvalidArgument(
        fmt::format("need 0 < lambda_min < lambda_max, got [{}, {}]", lambda_min, lambda_max));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
  if (grid_points < 100) throw InvalidArgument("grid_points must be >= 100");
  if (!(refine_tol > 0.0)) throw InvalidArgument("refine_tol must be > 0");
}

double censored_loglik(const GroupStats& stats, double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument(fmt::format("likelihood needs lambda > 0, got {}", lambda));
  }
  double ll = -static_cast<double>(stats.uncensored) * lambda +
              stats.sum_observed * std::log(lambda) - stats.sum_log_factorial;
  for (const auto& [v, k] : stats.censored) {
    if (v == 0) continue;  // P(C >= 0) = 1
    ll += static_cast<double>(k) * poisson_log_survival(v, lambda);
  }
  return ll;
}

double censored_loglik(std::span<const Observation> obs, double lambda) {
  GroupStats s;
  for (const auto& o : obs) s.add(o);
  return censored_loglik(s, lambda);
}

double mle(const GroupStats& stats, const LearnerConfig& config) {
  if (stats.count() == 0) throw InvalidArgument("maximum likelihood needs at least one observation");
  const double lo = config.lambda_min;
  const double hi = config.lambda_max;
  const int n = config.grid_points;
  auto at = [&](int k) { return k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1); };

  int best = 0;
  double best_ll = censored_loglik(stats, at(0));
  for (int k = 1; k < n; ++k) {
    const double ll = censored_loglik(stats, at(k));
    if (ll > best_ll) {
      best_ll = ll;
      best = k;
    }
  }

  // Golden-section search on the bracket around the best grid point.
  double a = at(std::max(best - 1, 0));
  double b = at(std::min(best + 1, n - 1));
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = censored_loglik(stats, x1);
  double f2 = censored_loglik(stats, x2);
  while (b - a > 0.5 * config.refine_tol * std::max(lo, 0.5 * (a + b))) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = censored_loglik(stats, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = censored_loglik(stats, x2);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_ll = censored_loglik(stats, refined);
  double result = refined_ll > best_ll ? refined : at(best);
  // The bracket may sit against a boundary; check both ends explicitly.
  for (double edge : {lo, hi}) {
    if (std::abs(edge - result) <= b - a + config.refine_tol * edge) {
      if (censored_loglik(stats, edge) >= censored_loglik(stats, result)) result = edge;
    }
  }
  return std::clamp(result, lo, hi);
}

DistributionEnvironment::DistributionEnvironment(std::vector<CandidateDistribution> truth)
    : truth_(std::move(truth)) {
  if (truth_.empty()) throw InvalidArgument("environment needs at least one group");
}

std::vector<Observation> DistributionEnvironment::step(const Allocation& alloc, Rng& rng) {
  if (alloc.groups() != truth_.size()) {
    throw InvalidArgument(fmt::format("allocation covers {} groups, environment has {}",
                                      alloc.groups(), truth_.size()));
  }
  std::vector<Observation> out;
  out.reserve(truth_.size());
  for (std::size_t i = 0; i < truth_.size(); ++i) {
    const int c = sample(truth_[i], rng);
    const int v = alloc.units[i];
    out.emplace_back(v, std::min(v, c));
  }
  return out;
}

std::vector<CandidateDistribution> poisson_models(std::span<const double> lambdas,
                                                  double truncation_tol) {
  std::vector<CandidateDistribution> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(poisson_truncate(PoissonSpec{l, truncation_tol}));
  return out;
}

LearningResult run_learning(Environment& env, const LearnerConfig& config, Rng& rng,
                            std::optional<std::span<const CandidateDistribution>> truth) {
  config.validate();
  const std::size_t g = env.groups();
  if (g == 0) throw InvalidArgument("environment has no groups");
  if (config.budget < static_cast<int>(g)) {
    throw InvalidArgument(fmt::format("budget {} is below the group count {}; the uniform start "
                                      "would leave a group without units",
                                      config.budget, g));
  }
  if (truth && truth->size() != g) {
    throw InvalidArgument("true distributions do not match the environment's group count");
  }

  const int budget = config.budget;
  Allocation current(std::vector<int>(g, budget / static_cast<int>(g)), budget);
  Allocation previous = current;
  std::vector<GroupStats> stats(g);
  std::vector<double> estimates(g, config.lambda_min);

  LearningResult result;
  result.trace.reserve(static_cast<std::size_t>(config.rounds));

  for (int t = 1; t <= config.rounds; ++t) {
    RoundRecord rec;
    rec.round = t;
    if (std::any_of(current.units.begin(), current.units.end(), [](int x) { return x == 0; })) {
      current = previous;
      rec.reused_previous = true;
    }

    const auto observed = env.step(current, rng);
    for (std::size_t i = 0; i < g; ++i) {
      stats[i].add(observed[i]);
      estimates[i] = mle(stats[i], config);
    }

    rec.allocation = current.units;
    rec.observations = observed;
    rec.estimates = estimates;
    if (truth) {
      rec.true_utility = utility(current, *truth);
      rec.true_violation = fairness_violation(current, *truth);
    }

    const auto models = poisson_models(estimates, config.truncation_tol);
    auto next = optimal_fair_allocation(config.alpha, models, budget);
    previous = current;
    if (next) {
      current = std::move(next->allocation);
    } else {
      rec.solver_infeasible = true;
    }
    result.trace.push_back(std::move(rec));
  }

  result.final_allocation = current;
  result.estimates = estimates;
  return result;
}

}  // namespace fairalloc
