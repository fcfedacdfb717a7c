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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fairalloc/rng.hpp"

namespace fairalloc {

/// Finite discrete distribution over per-round candidate counts 0..support_max.
///
/// Immutable once built. Construction validates the pmf (non-negative entries
/// summing to 1 within 1e-9), divides out the residual so the stored mass is
/// normalized, and precomputes the tables the solvers read in their inner
/// loops:
///
///   cdf(c)            = P(C <= c)
///   tail(c)           = P(C >= c) = 1 - cdf(c - 1)
///   expected_min(v)   = E[min(v, C)] = sum_{c=1..v} tail(c)
///   discovery_prob(v) = E[min(v, C) / C], with the c = 0 term taken as 0
///
/// All tables are constant past support_max, so queries beyond it are O(1).
class CandidateDistribution {
 public:
  static constexpr double kNormTolerance = 1e-9;

  explicit CandidateDistribution(std::vector<double> pmf);

  static CandidateDistribution point_mass(int count);

  int support_max() const { return static_cast<int>(pmf_.size()) - 1; }
  std::span<const double> pmf() const { return pmf_; }
  double pmf(int c) const;

  double cdf(int c) const;
  double tail(int c) const;
  double expected_min(int v) const;
  double discovery_prob(int v) const;

  double mean() const;
  double variance() const;

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  std::vector<double> expected_min_;
  std::vector<double> discovery_;
};

struct Group {
  std::string id;
  int size = 1;
};

/// Poisson rate plus the tail mass allowed to be cut when materializing it.
struct PoissonSpec {
  double lambda = 1.0;
  double truncation_tol = 1e-12;

  void validate() const;
};

// Counts above this are rejected by poisson_truncate.
inline constexpr int kDefaultMaxSupport = 1'000'000;

double tail(const CandidateDistribution& d, int c);

/// Poisson(lambda) cut at the smallest K whose untruncated mass above K is
/// below truncation_tol, then renormalized over 0..K.
CandidateDistribution poisson_truncate(const PoissonSpec& spec,
                                       int max_support = kDefaultMaxSupport);

// Untruncated Poisson quantities.
double poisson_pmf(int c, double lambda);
// P(X >= v); equals 1 - F(v - 1; lambda).
double poisson_survival(int v, double lambda);
// log P(X >= v), accurate when the survival is close to 1.
double poisson_log_survival(int v, double lambda);

double discovery_prob_precision(const CandidateDistribution& d, int v);

double tv_distance(const CandidateDistribution& a,
                   const CandidateDistribution& b);

/// Inverse-CDF draw. Deterministic given the generator state.
int sample(const CandidateDistribution& d, Rng& rng);

}  // namespace fairalloc
