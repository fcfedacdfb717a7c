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

#include "fairalloc/lp_relax.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

namespace simplex {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double value() const { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = at(i, c);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= factor * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Returns false when the objective is unbounded along an improving column.
  bool optimize(std::size_t allowed_cols, double eps) {
    constexpr int kDegenerateLimit = 50;
    int degenerate_run = 0;
    bool bland = false;
    for (;;) {
      std::size_t enter = allowed_cols;
      double most = -eps;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        const double d = at(rows_, j);
        if (d < most) {
          enter = j;
          if (bland) break;
          most = d;
        }
      }
      if (enter == allowed_cols) return true;

      std::size_t leave = rows_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= eps) continue;
        const double ratio = at(i, cols_) / a;
        if (leave == rows_ || ratio < best_ratio - eps ||
            (ratio <= best_ratio + eps && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return false;
      degenerate_run = best_ratio <= eps ? degenerate_run + 1 : 0;
      if (degenerate_run > kDegenerateLimit) bland = true;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Result maximize(std::span<const double> c, const Matrix& a_le, std::span<const double> b_le,
                const Matrix& a_eq, std::span<const double> b_eq, double eps) {
  const std::size_t n = c.size();
  const std::size_t n_le = a_le.size();
  const std::size_t n_eq = a_eq.size();
  if (b_le.size() != n_le || b_eq.size() != n_eq) {
    throw InvalidArgument("constraint matrix and right-hand side sizes differ");
  }
  const std::size_t m = n_le + n_eq;
  // Columns: structural, one slack per <= row, one artificial per row.
  const std::size_t slack0 = n;
  const std::size_t art0 = n + n_le;
  Tableau tab(m, n + n_le + m);

  for (std::size_t r = 0; r < m; ++r) {
    const bool le = r < n_le;
    const auto& row = le ? a_le[r] : a_eq[r - n_le];
    if (row.size() != n) throw InvalidArgument("constraint row has the wrong width");
    double b = le ? b_le[r] : b_eq[r - n_le];
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = sign * row[j];
    if (le) tab.at(r, slack0 + r) = sign;
    tab.rhs(r) = sign * b;
    if (le && sign > 0.0) {
      tab.basis()[r] = slack0 + r;
    } else {
      tab.at(r, art0 + r) = 1.0;
      tab.basis()[r] = art0 + r;
    }
  }

  // Phase 1: maximize -sum(artificials).
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < art0) continue;
    tab.cost(art0 + r) = 1.0;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < art0) continue;
    for (std::size_t j = 0; j <= tab.cols(); ++j) tab.at(m, j) -= tab.at(r, j);
  }
  tab.optimize(tab.cols(), eps);
  double scale = 1.0;
  for (std::size_t r = 0; r < m; ++r) scale = std::max(scale, std::abs(tab.rhs(r)));
  if (tab.value() < -1e-8 * scale) return Result{Status::kInfeasible, {}, 0.0};

  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < art0) continue;
    for (std::size_t j = 0; j < art0; ++j) {
      if (std::abs(tab.at(r, j)) > eps) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  // Phase 2 over structural and slack columns only.
  for (std::size_t j = 0; j <= tab.cols(); ++j) tab.at(m, j) = 0.0;
  for (std::size_t j = 0; j < n; ++j) tab.cost(j) = -c[j];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = tab.basis()[r];
    const double coef = tab.at(m, b);
    if (coef == 0.0) continue;
    for (std::size_t j = 0; j <= tab.cols(); ++j) tab.at(m, j) -= coef * tab.at(r, j);
  }
  if (!tab.optimize(art0, eps)) return Result{Status::kUnbounded, {}, 0.0};

  Result res;
  res.status = Status::kOptimal;
  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) res.x[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
  }
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace simplex

void LpInstance::validate() const {
  if (disc.empty() || disc.size() != f.size()) {
    throw InvalidArgument("LP instance needs matching, non-empty disc and f matrices");
  }
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
  }
  const std::size_t width = static_cast<std::size_t>(budget) + 1;
  for (std::size_t i = 0; i < disc.size(); ++i) {
    if (disc[i].size() != width || f[i].size() != width) {
      throw InvalidArgument(fmt::format("LP row {} must have {} columns", i, width));
    }
    if (disc[i][0] != 0.0) throw InvalidArgument("disc[i][0] must be 0");
    for (std::size_t j = 0; j < width; ++j) {
      if (f[i][j] < 0.0 || f[i][j] > 1.0) throw InvalidArgument("f entries must lie in [0, 1]");
      if (j > 0 && (disc[i][j] < disc[i][j - 1] || f[i][j] < f[i][j - 1])) {
        throw InvalidArgument("disc and f rows must be non-decreasing");
      }
    }
  }
}

LpInstance build_lp(std::span<const CandidateDistribution> dists, DiscoveryModel model,
                    double alpha, int budget, std::span<const int> sizes) {
  if (budget < 0) throw InvalidArgument("budget must be >= 0");
  if (model == DiscoveryModel::kRandom && sizes.size() != dists.size()) {
    throw InvalidArgument("random-model LP needs one group size per distribution");
  }
  LpInstance inst;
  inst.alpha = alpha;
  inst.budget = budget;
  const std::size_t width = static_cast<std::size_t>(budget) + 1;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    std::vector<double> disc(width, 0.0);
    std::vector<double> f(width, 0.0);
    for (int j = 1; j <= budget; ++j) {
      const auto col = static_cast<std::size_t>(j);
      if (model == DiscoveryModel::kPrecision) {
        disc[col] = dists[i].expected_min(j);
        f[col] = dists[i].discovery_prob(j);
      } else {
        const int m = sizes[i];
        if (m < 1) throw InvalidArgument("group sizes must be >= 1");
        const double frac = static_cast<double>(std::min(j, m)) / m;
        disc[col] = frac * dists[i].mean();
        f[col] = frac;
      }
    }
    inst.disc.push_back(std::move(disc));
    inst.f.push_back(std::move(f));
  }
  inst.validate();
  return inst;
}

LpSolution solve_lp(const LpInstance& inst) {
  inst.validate();
  const std::size_t g = inst.disc.size();
  const std::size_t width = static_cast<std::size_t>(inst.budget) + 1;
  const std::size_t n = g * width;
  auto var = [&](std::size_t i, std::size_t j) { return i * width + j; };

  std::vector<double> c(n);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < width; ++j) c[var(i, j)] = inst.disc[i][j];
  }

  Matrix a_le;
  std::vector<double> b_le;
  // Expected units used.
  {
    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < width; ++j) row[var(i, j)] = static_cast<double>(j);
    }
    a_le.push_back(std::move(row));
    b_le.push_back(inst.budget);
  }
  // E[f_i] - E[f_k] <= alpha for every ordered pair.
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t k = 0; k < g; ++k) {
      if (i == k) continue;
      std::vector<double> row(n, 0.0);
      for (std::size_t j = 0; j < width; ++j) {
        row[var(i, j)] += inst.f[i][j];
        row[var(k, j)] -= inst.f[k][j];
      }
      a_le.push_back(std::move(row));
      b_le.push_back(inst.alpha);
    }
  }
  Matrix a_eq;
  std::vector<double> b_eq;
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < width; ++j) row[var(i, j)] = 1.0;
    a_eq.push_back(std::move(row));
    b_eq.push_back(1.0);
  }

  const auto res = simplex::maximize(c, a_le, b_le, a_eq, b_eq);
  if (res.status != simplex::Status::kOptimal) {
    throw UnsupportedParameter("LP relaxation did not reach an optimal basis");
  }
  LpSolution sol;
  sol.objective = res.objective;
  sol.p.assign(g, std::vector<double>(width, 0.0));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < width; ++j) sol.p[i][j] = res.x[var(i, j)];
  }
  return sol;
}

}  // namespace fairalloc
