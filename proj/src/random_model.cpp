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

#include "fairalloc/random_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

void RandomModelInstance::validate() const {
  if (groups.empty()) throw InvalidArgument("instance needs at least one group");
  if (mus.size() != groups.size()) {
    throw InvalidArgument(
        fmt::format("{} mus for {} groups", mus.size(), groups.size()));
  }
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  for (const auto& g : groups) {
    if (g.size < 1) throw InvalidArgument(fmt::format("group '{}' has size < 1", g.id));
  }
  for (double mu : mus) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw InvalidArgument(fmt::format("mu {} outside [0, 1]", mu));
    }
  }
}

int RandomModelInstance::total_size() const {
  int m = 0;
  for (const auto& g : groups) m += g.size;
  return m;
}

int sample_discovery(int m, int c, int v, Rng& rng) {
  if (m < 0 || c < 0 || v < 0 || c > m || v > m) {
    throw InvalidArgument(
        fmt::format("hypergeometric parameters out of range: m={} c={} v={}", m, c, v));
  }
  // Draw v individuals without replacement and count the candidates hit.
  int remaining = m;
  int successes = c;
  int hits = 0;
  for (int k = 0; k < v; ++k) {
    if (rng.below(static_cast<std::uint64_t>(remaining)) <
        static_cast<std::uint64_t>(successes)) {
      ++hits;
      --successes;
    }
    --remaining;
  }
  return hits;
}

namespace {

void check(const RandomModelInstance& inst, const Allocation& alloc) {
  if (alloc.groups() != inst.size()) {
    throw InvalidArgument(fmt::format("allocation covers {} groups, instance has {}",
                                      alloc.groups(), inst.size()));
  }
}

double ratio(int v, int m) { return static_cast<double>(v) / static_cast<double>(m); }

// Group indices by decreasing mu; equal mus keep index order.
std::vector<std::size_t> by_mu(const RandomModelInstance& inst) {
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return inst.mus[a] > inst.mus[b]; });
  return order;
}

}  // namespace

double random_utility(const RandomModelInstance& inst, const Allocation& alloc) {
  check(inst, alloc);
  double u = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) u += inst.mus[i] * alloc.units[i];
  return u;
}

double random_fairness_violation(const RandomModelInstance& inst, const Allocation& alloc) {
  check(inst, alloc);
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double r = ratio(alloc.units[i], inst.groups[i].size);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return std::max(0.0, hi - lo);
}

Allocation optimal_allocation_random(const RandomModelInstance& inst) {
  inst.validate();
  std::vector<int> v(inst.size(), 0);
  int remaining = inst.budget;
  for (std::size_t i : by_mu(inst)) {
    const int give = std::min(remaining, inst.groups[i].size);
    v[i] = give;
    remaining -= give;
  }
  return Allocation(std::move(v), inst.budget);
}

std::optional<Allocation> optimal_fair_allocation_random(const RandomModelInstance& inst,
                                                         double alpha) {
  inst.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  const std::size_t g = inst.size();
  const int budget = inst.budget;
  const auto order = by_mu(inst);

  std::optional<Allocation> best;
  double best_utility = -1.0;
  std::vector<int> lb(g);
  std::vector<int> ub(g);

  for (std::size_t anchor = 0; anchor < g; ++anchor) {
    const int ma = inst.groups[anchor].size;
    for (int va = 0; va <= std::min(budget, ma); ++va) {
      const double top = ratio(va, ma);
      bool feasible = true;
      int committed = 0;
      for (std::size_t j = 0; j < g && feasible; ++j) {
        if (j == anchor) {
          lb[j] = ub[j] = va;
        } else {
          const int mj = inst.groups[j].size;
          int lo = 0;
          while (lo <= mj && top - ratio(lo, mj) > alpha + kFairnessSlack) ++lo;
          int hi = -1;
          while (hi + 1 <= mj && ratio(hi + 1, mj) <= top) ++hi;
          if (lo > mj || hi < lo) feasible = false;
          lb[j] = lo;
          ub[j] = hi;
        }
        committed += lb[j];
      }
      if (!feasible || committed > budget) continue;

      // Linear objective over a box: fill the best-mu groups first.
      std::vector<int> v = lb;
      int surplus = budget - committed;
      for (std::size_t j : order) {
        const int add = std::min(surplus, ub[j] - v[j]);
        v[j] += add;
        surplus -= add;
      }
      double u = 0.0;
      for (std::size_t j = 0; j < g; ++j) u += inst.mus[j] * v[j];
      if (u > best_utility) {
        best_utility = u;
        best = Allocation(std::move(v), budget);
      }
    }
  }
  return best;
}

double pof_closed_form(int m1, int total_size, int budget, double alpha) {
  if (m1 < 1 || total_size < m1) {
    throw InvalidArgument(fmt::format("need 1 <= m1 <= M, got m1={} M={}", m1, total_size));
  }
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  if (budget > m1) {
    throw UnsupportedParameter(fmt::format(
        "closed form holds only for budget <= m1 (budget={}, m1={})", budget, m1));
  }
  if (ratio(budget, m1) <= alpha) return 1.0;
  const double m = m1;
  const double total = total_size;
  return total / (m + alpha * (total - m));
}

RandomModelInstance worst_case_instance(int groups, int budget, double alpha) {
  if (groups < 2) throw InvalidArgument("worst-case instance needs at least two groups");
  if (budget < 1) throw InvalidArgument("worst-case instance needs budget >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  RandomModelInstance inst;
  inst.budget = budget;
  for (int i = 0; i < groups; ++i) {
    inst.groups.push_back(Group{std::to_string(i + 1), budget});
    inst.mus.push_back(i == 0 ? 1.0 : 0.0);
  }
  return inst;
}

std::optional<double> empirical_pof(const RandomModelInstance& inst, double alpha) {
  const double opt = random_utility(inst, optimal_allocation_random(inst));
  const auto fair = optimal_fair_allocation_random(inst, alpha);
  if (!fair) return std::nullopt;
  const double u = random_utility(inst, *fair);
  if (u <= 0.0) {
    if (opt <= 0.0) return 1.0;
    return std::nullopt;
  }
  return opt / u;
}

}  // namespace fairalloc
