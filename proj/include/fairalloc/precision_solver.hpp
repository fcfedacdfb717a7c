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

#include <optional>
#include <span>
#include <vector>

#include "fairalloc/distributions.hpp"

namespace fairalloc {

/// Integer split of `budget` resource units across groups.
struct Allocation {
  std::vector<int> units;
  int budget = 0;

  Allocation() = default;
  Allocation(std::vector<int> u, int b);

  static Allocation zeros(std::size_t groups, int budget);

  int total() const;
  std::size_t groups() const { return units.size(); }
  bool operator==(const Allocation&) const = default;
};

// Slack used when comparing discovery probabilities against alpha.
inline constexpr double kFairnessSlack = 1e-12;

struct FairSolveReport {
  Allocation allocation;
  double utility = 0.0;
  double violation = 0.0;
  long guesses_examined = 0;
  // Group with the highest discovery probability in the winning guess.
  int anchor_group = -1;
};

/// Expected discovered candidates under the precision model,
/// sum_i sum_{c=1..v_i} tail_i(c).
double utility(const Allocation& alloc,
               std::span<const CandidateDistribution> dists);

/// max_{i,j} |f_i(v_i) - f_j(v_j)|.
double fairness_violation(const Allocation& alloc,
                          std::span<const CandidateDistribution> dists);

/// Unconstrained optimum: V greedy steps, each granting one unit to the
/// group with the largest marginal gain tail_j(v_j + 1). Ties go to the
/// lowest group index.
Allocation optimal_allocation(std::span<const CandidateDistribution> dists,
                              int budget);

/// Optimal alpha-fair allocation for the precision model.
///
/// Enumerates every (anchor group i, anchor allocation v_i) guess. The anchor
/// is assumed to hold the highest discovery probability, which pins every
/// other group j to the unit range where f_j lies in [f_i(v_i) - alpha,
/// f_i(v_i)]. Each group starts at the bottom of its range and the remaining
/// units are handed out greedily by marginal tail without leaving the range.
/// The best guess over all G*(V+1) candidates is returned, or nullopt when no
/// guess admits a feasible allocation.
std::optional<FairSolveReport> optimal_fair_allocation(
    double alpha, std::span<const CandidateDistribution> dists, int budget);

}  // namespace fairalloc
