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
#include <utility>

#include "fairalloc/distributions.hpp"
#include "fairalloc/precision_solver.hpp"
#include "fairalloc/random_model.hpp"

namespace fairalloc::oracle {

// Exhaustive reference solvers. Everything here evaluates utilities and
// discovery probabilities directly from the pmf (no tail tables) so the
// results do not share a code path with the production solvers.

struct EnumerationBudget {
  int max_groups = 4;
  int max_budget = 12;
  int max_support = 8;
  long max_states = 10'000'000;
};

struct EnumerationResult {
  double utility = 0.0;
  Allocation argmax;
};

// E[min(v, C)] by direct summation.
double direct_expected_min(const CandidateDistribution& d, int v);
// E[min(v, C) / C] with the C = 0 term taken as 0.
double direct_discovery_prob(const CandidateDistribution& d, int v);

/// Best utility over every integer vector with sum <= V (and, when alpha is
/// given, pairwise discovery gaps <= alpha + 1e-12). nullopt when alpha
/// filters out every vector. Throws BudgetExceeded outside `limits`.
std::optional<EnumerationResult> enumerate_optimal(
    std::span<const CandidateDistribution> dists, int budget,
    std::optional<double> alpha, const EnumerationBudget& limits = {});

/// Random-model counterpart: v_i <= m_i, utility sum mu_i v_i, gaps on v_i/m_i.
std::optional<EnumerationResult> enumerate_optimal_random(
    const RandomModelInstance& inst, std::optional<double> alpha,
    const EnumerationBudget& limits = {});

/// Two distributions that agree on 0..c* (c* = m/2 - 2) but put their
/// remaining alpha*m mass at c*+1 and at m respectively, so that no allocation
/// below m - 1 units can tell them apart within alpha.
std::pair<CandidateDistribution, CandidateDistribution> adversarial_pair(int m, double alpha);

}  // namespace fairalloc::oracle
