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
#include <vector>

#include "fairalloc/distributions.hpp"
#include "fairalloc/precision_solver.hpp"
#include "fairalloc/rng.hpp"

namespace fairalloc {

// Random discovery model: each of the v units lands on a uniformly random
// individual of the group (without replacement), so discoveries follow a
// hypergeometric law and the discovery probability is simply v / m.

struct RandomModelInstance {
  std::vector<Group> groups;
  // mus[i] = E[c_i] / m_i, the expected fraction of candidates.
  std::vector<double> mus;
  int budget = 0;

  void validate() const;
  std::size_t size() const { return groups.size(); }
  int total_size() const;
};

/// Hypergeometric draw: population m, c successes, v draws.
int sample_discovery(int m, int c, int v, Rng& rng);

double random_utility(const RandomModelInstance& inst, const Allocation& alloc);

// max_{i,j} |v_i/m_i - v_j/m_j|
double random_fairness_violation(const RandomModelInstance& inst, const Allocation& alloc);

/// Fills groups in decreasing mu order, each up to min(remaining, m_i).
Allocation optimal_allocation_random(const RandomModelInstance& inst);

/// Exact integer optimum under |v_i/m_i - v_j/m_j| <= alpha, v_i <= m_i.
/// nullopt when integrality leaves no feasible point.
std::optional<Allocation> optimal_fair_allocation_random(const RandomModelInstance& inst,
                                                         double alpha);

/// Worst-case price of fairness for the largest-mu group of size m1 in a
/// population of total size M. Requires budget <= m1.
double pof_closed_form(int m1, int total_size, int budget, double alpha);

/// Tightness instance: every group has size V, group 0 holds V candidates
/// and the rest none.
RandomModelInstance worst_case_instance(int groups, int budget, double alpha);

/// Optimal utility over optimal alpha-fair utility, both from the solvers
/// above. nullopt when no fair allocation exists or it discovers nothing
/// while the optimum does.
std::optional<double> empirical_pof(const RandomModelInstance& inst, double alpha);

}  // namespace fairalloc
