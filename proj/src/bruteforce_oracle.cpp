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

#include "fairalloc/bruteforce_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc::oracle {

double direct_expected_min(const CandidateDistribution& d, int v) {
  double s = 0.0;
  for (int c = 0; c <= d.support_max(); ++c) s += std::min(v, c) * d.pmf(c);
  return s;
}

double direct_discovery_prob(const CandidateDistribution& d, int v) {
  double s = 0.0;
  for (int c = 1; c <= d.support_max(); ++c) {
    s += static_cast<double>(std::min(v, c)) / c * d.pmf(c);
  }
  return s;
}

namespace {

// Number of vectors in {0..caps[i]} with sum <= budget, saturating at limit.
long count_states(std::span<const int> caps, int budget, long limit) {
  std::vector<long> ways(static_cast<std::size_t>(budget) + 1, 0);
  ways[0] = 1;
  for (int cap : caps) {
    std::vector<long> next(ways.size(), 0);
    for (int s = 0; s <= budget; ++s) {
      for (int x = 0; x <= cap && x <= s; ++x) {
        next[static_cast<std::size_t>(s)] =
            std::min(limit, next[static_cast<std::size_t>(s)] + ways[static_cast<std::size_t>(s - x)]);
      }
    }
    ways = std::move(next);
  }
  long total = 0;
  for (long w : ways) total = std::min(limit, total + w);
  return total;
}

// Lexicographic enumeration of all vectors with v_i <= caps[i], sum <= budget.
void for_each_vector(std::span<const int> caps, int budget,
                     const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> v(caps.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == caps.size()) {
      visit(v);
      return;
    }
    for (int x = 0; x <= std::min(caps[i], left); ++x) {
      v[i] = x;
      rec(i + 1, left - x);
    }
    v[i] = 0;
  };
  rec(0, budget);
}

void check_alpha(std::optional<double> alpha) {
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", *alpha));
  }
}

std::optional<EnumerationResult> search(
    std::span<const int> caps, int budget, std::optional<double> alpha,
    const std::function<double(std::size_t, int)>& value,
    const std::function<double(std::size_t, int)>& prob) {
  std::optional<EnumerationResult> best;
  for_each_vector(caps, budget, [&](const std::vector<int>& v) {
    if (alpha) {
      double worst = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
          worst = std::max(worst, std::abs(prob(i, v[i]) - prob(j, v[j])));
        }
      }
      if (worst > *alpha + 1e-12) return;
    }
    double u = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) u += value(i, v[i]);
    if (!best || u > best->utility) best = EnumerationResult{u, Allocation(v, budget)};
  });
  return best;
}

}  // namespace

std::optional<EnumerationResult> enumerate_optimal(
    std::span<const CandidateDistribution> dists, int budget,
    std::optional<double> alpha, const EnumerationBudget& limits) {
  check_alpha(alpha);
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (static_cast<int>(dists.size()) > limits.max_groups || budget > limits.max_budget) {
    throw BudgetExceeded(fmt::format("enumeration over {} groups with budget {} exceeds limits",
                                     dists.size(), budget));
  }
  for (const auto& d : dists) {
    if (d.support_max() > limits.max_support) {
      throw BudgetExceeded(fmt::format("support {} exceeds enumeration limit {}",
                                       d.support_max(), limits.max_support));
    }
  }
  const std::vector<int> caps(dists.size(), budget);
  if (count_states(caps, budget, limits.max_states) >= limits.max_states) {
    throw BudgetExceeded("enumeration state count exceeds limit");
  }
  return search(
      caps, budget, alpha,
      [&](std::size_t i, int v) { return direct_expected_min(dists[i], v); },
      [&](std::size_t i, int v) { return direct_discovery_prob(dists[i], v); });
}

std::optional<EnumerationResult> enumerate_optimal_random(const RandomModelInstance& inst,
                                                          std::optional<double> alpha,
                                                          const EnumerationBudget& limits) {
  inst.validate();
  check_alpha(alpha);
  if (static_cast<int>(inst.size()) > limits.max_groups) {
    throw BudgetExceeded(fmt::format("{} groups exceed enumeration limit", inst.size()));
  }
  std::vector<int> caps;
  for (const auto& g : inst.groups) caps.push_back(std::min(g.size, inst.budget));
  if (count_states(caps, inst.budget, limits.max_states) >= limits.max_states) {
    throw BudgetExceeded("enumeration state count exceeds limit");
  }
  return search(
      caps, inst.budget, alpha,
      [&](std::size_t i, int v) { return inst.mus[i] * v; },
      [&](std::size_t i, int v) { return static_cast<double>(v) / inst.groups[i].size; });
}

std::pair<CandidateDistribution, CandidateDistribution> adversarial_pair(int m, double alpha) {
  if (m <= 6 || m % 2 != 0) {
    throw InvalidArgument(fmt::format("adversarial pair needs even m > 6, got {}", m));
  }
  if (!(alpha > 0.0) || !(alpha * m < 1.0)) {
    throw InvalidArgument(
        fmt::format("adversarial pair needs 0 < alpha < 1/m, got alpha={} m={}", alpha, m));
  }
  const int cstar = m / 2 - 2;
  const double moved = alpha * m;
  const double shared = (1.0 - moved) / (cstar + 1);

  std::vector<double> near(static_cast<std::size_t>(cstar) + 2, 0.0);
  std::vector<double> far(static_cast<std::size_t>(m) + 1, 0.0);
  for (int c = 0; c <= cstar; ++c) {
    near[static_cast<std::size_t>(c)] = shared;
    far[static_cast<std::size_t>(c)] = shared;
  }
  near[static_cast<std::size_t>(cstar) + 1] = moved;
  far[static_cast<std::size_t>(m)] = moved;
  return {CandidateDistribution(std::move(near)), CandidateDistribution(std::move(far))};
}

}  // namespace fairalloc::oracle
