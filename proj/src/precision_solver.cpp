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

#include "fairalloc/precision_solver.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

Allocation::Allocation(std::vector<int> u, int b) : units(std::move(u)), budget(b) {
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  for (int x : units) {
    if (x < 0 || x > budget) {
      throw InvalidArgument(fmt::format("allocation entry {} outside [0, {}]", x, budget));
    }
  }
  if (total() > budget) {
    throw InvalidArgument(
        fmt::format("allocation uses {} units, budget is {}", total(), budget));
  }
}

Allocation Allocation::zeros(std::size_t groups, int budget) {
  return Allocation(std::vector<int>(groups, 0), budget);
}

int Allocation::total() const { return std::accumulate(units.begin(), units.end(), 0); }

namespace {

void check_groups(const Allocation& alloc, std::span<const CandidateDistribution> dists) {
  if (alloc.groups() != dists.size()) {
    throw InvalidArgument(fmt::format("allocation covers {} groups, {} distributions given",
                                      alloc.groups(), dists.size()));
  }
}

// Hands out `surplus` units one at a time to the group with the largest
// marginal tail among those still below their cap.
void greedy_fill(std::vector<int>& v, std::span<const int> cap, int surplus,
                 std::span<const CandidateDistribution> dists) {
  const std::size_t g = v.size();
  for (int t = 0; t < surplus; ++t) {
    int best = -1;
    double best_gain = -1.0;
    for (std::size_t j = 0; j < g; ++j) {
      if (v[j] >= cap[j]) continue;
      const double gain = dists[j].tail(v[j] + 1);
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) return;
    ++v[static_cast<std::size_t>(best)];
  }
}

}  // namespace

double utility(const Allocation& alloc, std::span<const CandidateDistribution> dists) {
  check_groups(alloc, dists);
  double u = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) u += dists[i].expected_min(alloc.units[i]);
  return u;
}

double fairness_violation(const Allocation& alloc,
                          std::span<const CandidateDistribution> dists) {
  check_groups(alloc, dists);
  if (dists.empty()) return 0.0;
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const double f = dists[i].discovery_prob(alloc.units[i]);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return std::max(0.0, hi - lo);
}

Allocation optimal_allocation(std::span<const CandidateDistribution> dists, int budget) {
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  std::vector<int> v(dists.size(), 0);
  const std::vector<int> cap(dists.size(), budget);
  greedy_fill(v, cap, budget, dists);
  return Allocation(std::move(v), budget);
}

std::optional<FairSolveReport> optimal_fair_allocation(
    double alpha, std::span<const CandidateDistribution> dists, int budget) {
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  const std::size_t g = dists.size();
  if (g == 0) throw InvalidArgument("at least one group is required");

  // f tables over 0..V, one per group.
  std::vector<std::vector<double>> f(g, std::vector<double>(static_cast<std::size_t>(budget) + 1));
  for (std::size_t j = 0; j < g; ++j) {
    for (int v = 0; v <= budget; ++v) f[j][static_cast<std::size_t>(v)] = dists[j].discovery_prob(v);
  }

  std::optional<FairSolveReport> best;
  double best_utility = -1.0;
  long guesses = 0;
  std::vector<int> lb(g);
  std::vector<int> ub(g);

  for (std::size_t anchor = 0; anchor < g; ++anchor) {
    for (int va = 0; va <= budget; ++va) {
      ++guesses;
      const double top = f[anchor][static_cast<std::size_t>(va)];
      bool feasible = true;
      int committed = 0;
      for (std::size_t j = 0; j < g && feasible; ++j) {
        if (j == anchor) {
          lb[j] = ub[j] = va;
        } else {
          const auto& fj = f[j];
          // f is non-decreasing, so both bounds are partition points.
          auto low = std::partition_point(fj.begin(), fj.end(), [&](double x) {
            return top - x > alpha + kFairnessSlack;
          });
          auto high = std::partition_point(fj.begin(), fj.end(),
                                           [&](double x) { return x - top <= kFairnessSlack; });
          if (low == fj.end() || high == fj.begin()) {
            feasible = false;
            break;
          }
          lb[j] = static_cast<int>(low - fj.begin());
          ub[j] = static_cast<int>(high - fj.begin()) - 1;
          if (lb[j] > ub[j]) feasible = false;
        }
        committed += lb[j];
      }
      if (!feasible || committed > budget) continue;

      std::vector<int> v = lb;
      greedy_fill(v, ub, budget - committed, dists);

      double u = 0.0;
      for (std::size_t j = 0; j < g; ++j) u += dists[j].expected_min(v[j]);
      if (u > best_utility) {
        best_utility = u;
        FairSolveReport report;
        report.allocation = Allocation(std::move(v), budget);
        report.utility = u;
        report.anchor_group = static_cast<int>(anchor);
        best = std::move(report);
      }
    }
  }

  if (best) {
    best->violation = fairness_violation(best->allocation, dists);
    best->guesses_examined = guesses;
  }
  return best;
}

}  // namespace fairalloc
