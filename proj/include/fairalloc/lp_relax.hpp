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

#include <span>
#include <vector>

#include "fairalloc/distributions.hpp"

namespace fairalloc {

using Matrix = std::vector<std::vector<double>>;

enum class DiscoveryModel { kPrecision, kRandom };

/// Randomized allocation LP: for each group i pick a lottery p_i over unit
/// counts 0..V. Utilities and discovery probabilities are linear in p, the
/// budget holds in expectation.
struct LpInstance {
  // disc[i][j] = E[discovered | j units to group i]
  Matrix disc;
  // f[i][j] = E[discovered / candidates | j units to group i]
  Matrix f;
  double alpha = 0.0;
  int budget = 0;

  void validate() const;
};

struct LpSolution {
  Matrix p;
  double objective = 0.0;
};

/// Precision model uses the distributions' tail sums and discovery tables.
/// Random model uses min(j, m_i) * E[c_i] / m_i and min(j, m_i) / m_i, so
/// `sizes` must be given for it.
LpInstance build_lp(std::span<const CandidateDistribution> dists, DiscoveryModel model,
                    double alpha, int budget, std::span<const int> sizes = {});

LpSolution solve_lp(const LpInstance& inst);

namespace simplex {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
};

/// maximize c.x  s.t.  A_le x <= b_le,  A_eq x = b_eq,  x >= 0.
/// Dense two-phase tableau simplex; Dantzig pricing with a switch to Bland's
/// rule after a run of degenerate pivots.
Result maximize(std::span<const double> c, const Matrix& a_le, std::span<const double> b_le,
                const Matrix& a_eq, std::span<const double> b_eq, double eps = 1e-10);

}  // namespace simplex

}  // namespace fairalloc
