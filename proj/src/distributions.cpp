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

#include "fairalloc/distributions.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "fairalloc/errors.hpp"

namespace fairalloc {

CandidateDistribution::CandidateDistribution(std::vector<double> pmf)
    : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw InvalidArgument("pmf must have at least one entry");
  double total = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("pmf entries must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InvalidArgument(
        fmt::format("pmf sums to {:.12g}, expected 1 within {}", total,
                    kNormTolerance));
  }
  for (double& p : pmf_) p /= total;

  const std::size_t n = pmf_.size();
  cdf_.resize(n);
  double acc = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    acc += pmf_[c];
    cdf_[c] = std::min(acc, 1.0);
  }
  cdf_[n - 1] = 1.0;

  // expected_min_[v] for v = 0..n; tail(v) vanishes for v > support_max.
  expected_min_.assign(n + 1, 0.0);
  for (std::size_t v = 1; v <= n; ++v) {
    expected_min_[v] = expected_min_[v - 1] + tail(static_cast<int>(v));
  }

  // f(v+1) - f(v) = sum_{c >= v+1} pmf(c)/c, accumulated so the table is
  // monotone in floating point as well.
  std::vector<double> inv_suffix(n + 1, 0.0);
  for (std::size_t c = n - 1; c >= 1; --c) {
    inv_suffix[c] = inv_suffix[c + 1] + pmf_[c] / static_cast<double>(c);
  }
  discovery_.assign(n, 0.0);
  for (std::size_t v = 1; v < n; ++v) {
    discovery_[v] = std::min(1.0, discovery_[v - 1] + inv_suffix[v]);
  }
}

CandidateDistribution CandidateDistribution::point_mass(int count) {
  if (count < 0) throw InvalidArgument("point mass count must be >= 0");
  std::vector<double> pmf(static_cast<std::size_t>(count) + 1, 0.0);
  pmf.back() = 1.0;
  return CandidateDistribution(std::move(pmf));
}

double CandidateDistribution::pmf(int c) const {
  if (c < 0 || c > support_max()) return 0.0;
  return pmf_[static_cast<std::size_t>(c)];
}

double CandidateDistribution::cdf(int c) const {
  if (c < 0) return 0.0;
  if (c >= support_max()) return 1.0;
  return cdf_[static_cast<std::size_t>(c)];
}

double CandidateDistribution::tail(int c) const {
  if (c <= 0) return 1.0;
  if (c > support_max()) return 0.0;
  return std::max(0.0, 1.0 - cdf_[static_cast<std::size_t>(c - 1)]);
}

double CandidateDistribution::expected_min(int v) const {
  if (v <= 0) return 0.0;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(v),
                                         expected_min_.size() - 1);
  return expected_min_[idx];
}

double CandidateDistribution::discovery_prob(int v) const {
  if (v <= 0) return 0.0;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(v),
                                         discovery_.size() - 1);
  return discovery_[idx];
}

double CandidateDistribution::mean() const {
  double m = 0.0;
  for (std::size_t c = 0; c < pmf_.size(); ++c) {
    m += static_cast<double>(c) * pmf_[c];
  }
  return m;
}

double CandidateDistribution::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t c = 0; c < pmf_.size(); ++c) {
    const double d = static_cast<double>(c) - mu;
    s += d * d * pmf_[c];
  }
  return s;
}

void PoissonSpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument(fmt::format("Poisson rate must be > 0, got {}", lambda));
  }
  if (!(truncation_tol > 0.0 && truncation_tol <= 1e-6)) {
    throw InvalidArgument(
        fmt::format("truncation_tol must lie in (0, 1e-6], got {}", truncation_tol));
  }
}

double tail(const CandidateDistribution& d, int c) { return d.tail(c); }

double poisson_pmf(int c, double lambda) {
  if (c < 0) return 0.0;
  return std::exp(c * std::log(lambda) - lambda - std::lgamma(c + 1.0));
}

double poisson_survival(int v, double lambda) {
  if (v <= 0) return 1.0;
  return boost::math::gamma_p(static_cast<double>(v), lambda);
}

double poisson_log_survival(int v, double lambda) {
  if (v <= 0) return 0.0;
  const double p = boost::math::gamma_p(static_cast<double>(v), lambda);
  if (p < 0.5) return std::log(p);
  return std::log1p(-boost::math::gamma_q(static_cast<double>(v), lambda));
}

CandidateDistribution poisson_truncate(const PoissonSpec& spec, int max_support) {
  spec.validate();
  const double lambda = spec.lambda;
  // Mass above K is poisson_survival(K + 1); find the smallest K with it
  // below tolerance. Gallop upward from the mean, then bisect.
  auto ok = [&](long k) {
    return poisson_survival(static_cast<int>(k + 1), lambda) < spec.truncation_tol;
  };
  long lo = -1;
  long hi = static_cast<long>(std::ceil(lambda));
  long step = std::max(8L, static_cast<long>(std::ceil(std::sqrt(lambda))));
  while (!ok(hi)) {
    lo = hi;
    hi += step;
    step *= 2;
    if (hi > static_cast<long>(max_support) * 2 + 16) break;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (hi > max_support) {
    throw UnsupportedParameter(fmt::format(
        "Poisson rate {} needs support {} above the cap {}", lambda, hi, max_support));
  }
  std::vector<double> pmf(static_cast<std::size_t>(hi) + 1);
  double total = 0.0;
  for (std::size_t c = 0; c < pmf.size(); ++c) {
    pmf[c] = poisson_pmf(static_cast<int>(c), lambda);
    total += pmf[c];
  }
  for (double& p : pmf) p /= total;
  return CandidateDistribution(std::move(pmf));
}

double discovery_prob_precision(const CandidateDistribution& d, int v) {
  return d.discovery_prob(v);
}

double tv_distance(const CandidateDistribution& a,
                   const CandidateDistribution& b) {
  const int n = std::max(a.support_max(), b.support_max());
  double s = 0.0;
  for (int c = 0; c <= n; ++c) s += std::abs(a.pmf(c) - b.pmf(c));
  return 0.5 * s;
}

int sample(const CandidateDistribution& d, Rng& rng) {
  const double u = rng.uniform01();
  const auto pmf = d.pmf();
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t c = 0; c < pmf.size(); ++c) {
    if (pmf[c] <= 0.0) continue;
    last_positive = static_cast<int>(c);
    acc += pmf[c];
    if (u < acc) return last_positive;
  }
  return last_positive;
}

}  // namespace fairalloc
