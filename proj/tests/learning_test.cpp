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


#include "fairalloc/learning.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "fairalloc/errors.hpp"

using namespace fairalloc;
using doctest::Approx;

namespace {

GroupStats stats_of(std::initializer_list<Observation> obs) {
  GroupStats s;
  for (const auto& o : obs) s.add(o);
  return s;
}

// Dense grid maximizer, independent of the grid + golden-section search.
double dense_argmax(const GroupStats& s, double lo, double hi, int points) {
  double best = lo;
  double best_ll = censored_loglik(s, lo);
  for (int k = 1; k <= points; ++k) {
    const double x = lo + (hi - lo) * k / points;
    const double ll = censored_loglik(s, x);
    if (ll > best_ll) {
      best_ll = ll;
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("observation validation and censoring") {
  CHECK_THROWS_AS(Observation(2, 3), InvalidArgument);
  CHECK_THROWS_AS(Observation(2, -1), InvalidArgument);
  CHECK(Observation(3, 3).censored());
  CHECK_FALSE(Observation(3, 2).censored());
}

TEST_CASE("censored_loglik examples") {
  CHECK(censored_loglik(stats_of({Observation(1, 0)}), 1.0) == Approx(-1.0).epsilon(1e-14));
  CHECK(censored_loglik(stats_of({Observation(1, 1)}), 1.0) ==
        Approx(std::log(1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(censored_loglik(GroupStats{}, 3.7) == 0.0);
  CHECK_THROWS_AS(censored_loglik(GroupStats{}, 0.0), InvalidArgument);

  const std::vector<Observation> obs{Observation(10, 3), Observation(4, 4), Observation(6, 2)};
  GroupStats s;
  for (const auto& o : obs) s.add(o);
  for (double lambda : {0.5, 2.0, 7.5}) {
    CHECK(censored_loglik(obs, lambda) == Approx(censored_loglik(s, lambda)).epsilon(1e-14));
  }
}

TEST_CASE("mle examples") {
  LearnerConfig cfg;
  cfg.lambda_min = 0.1;
  cfg.lambda_max = 100.0;
  const auto s = stats_of({Observation(10, 3), Observation(10, 5), Observation(10, 4)});
  CHECK(std::abs(mle(s, cfg) - 4.0) <= cfg.refine_tol * 4.0);

  cfg.lambda_min = 0.5;
  cfg.lambda_max = 10.0;
  CHECK(mle(stats_of({Observation(1, 0)}), cfg) == 0.5);
  CHECK(mle(stats_of({Observation(3, 3), Observation(5, 5)}), cfg) == 10.0);
  CHECK_THROWS_AS(mle(GroupStats{}, cfg), InvalidArgument);
}

TEST_CASE("mle of uncensored samples is the clamped mean") {
  Rng rng(5150);
  LearnerConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    GroupStats s;
    const int n = 1 + static_cast<int>(rng.below(40));
    for (int k = 0; k < n; ++k) {
      const int o = static_cast<int>(rng.below(150));
      s.add(Observation(o + 1, o));
    }
    const double mean = s.sum_observed / static_cast<double>(n);
    const double target = std::clamp(mean, cfg.lambda_min, cfg.lambda_max);
    CHECK(std::abs(mle(s, cfg) - target) <= cfg.refine_tol * std::max(1.0, target));
  }
}

TEST_CASE("mle with censoring agrees with a dense grid") {
  Rng rng(99);
  LearnerConfig cfg;
  cfg.lambda_min = 0.5;
  cfg.lambda_max = 40.0;
  for (int trial = 0; trial < 30; ++trial) {
    GroupStats s;
    for (int k = 0; k < 20; ++k) {
      const int v = 1 + static_cast<int>(rng.below(15));
      const int c = static_cast<int>(rng.below(20));
      s.add(Observation(v, std::min(v, c)));
    }
    const double dense = dense_argmax(s, cfg.lambda_min, cfg.lambda_max, 200000);
    const double got = mle(s, cfg);
    // Both sit on the same concave peak; compare likelihoods, then location.
    CHECK(censored_loglik(s, got) >= censored_loglik(s, dense) - 1e-6);
    CHECK(std::abs(got - dense) <= 1e-3 * std::max(1.0, dense));
  }
}

TEST_CASE("config validation") {
  LearnerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.lambda_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.lambda_max = 0.4;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.grid_points = 50;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.rounds = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.alpha = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("history bookkeeping") {
  History h(2);
  const std::vector<Observation> r1{Observation(3, 1), Observation(2, 2)};
  const std::vector<Observation> r2{Observation(3, 0), Observation(2, 1)};
  h.record(r1);
  h.record(r2);
  CHECK(h.rounds() == 2);
  const auto s0 = h.stats(0);
  CHECK(s0.uncensored == 2);
  CHECK(s0.sum_observed == 1.0);
  const auto s1 = h.stats(1);
  CHECK(s1.uncensored == 1);
  CHECK(s1.censored.at(2) == 1);
  CHECK(s1.count() == 2);
  const std::vector<Observation> short_round{Observation(1, 0)};
  CHECK_THROWS_AS(h.record(short_round), InvalidArgument);
}

TEST_CASE("learning on point masses recovers the counts") {
  // k_i <= floor(V/G): the uniform start never censors.
  const std::vector<int> ks{1, 3, 5};
  std::vector<CandidateDistribution> truth;
  for (int k : ks) truth.push_back(CandidateDistribution::point_mass(k));
  DistributionEnvironment env(truth);
  LearnerConfig cfg;
  cfg.budget = 18;
  cfg.rounds = 2;
  cfg.alpha = 1.0;
  Rng rng(1);
  const auto result = run_learning(env, cfg, rng);
  REQUIRE(result.trace.size() == 2);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double target = std::max<double>(ks[i], cfg.lambda_min);
    CHECK(std::abs(result.estimates[i] - target) <= cfg.refine_tol * std::max(1.0, target));
  }
  CHECK(result.trace[0].allocation == std::vector<int>{6, 6, 6});
}

TEST_CASE("single round") {
  const auto truth = poisson_models(std::vector<double>{2.0, 4.0});
  DistributionEnvironment env(truth);
  LearnerConfig cfg;
  cfg.budget = 10;
  cfg.rounds = 1;
  Rng rng(3);
  const auto result = run_learning(env, cfg, rng, std::span<const CandidateDistribution>(truth));
  REQUIRE(result.trace.size() == 1);
  CHECK(result.trace[0].allocation == std::vector<int>{5, 5});
  CHECK(result.trace[0].true_utility.has_value());
  CHECK(result.final_allocation.total() <= cfg.budget);
}

TEST_CASE("learning is reproducible and validates its budget") {
  const auto truth = poisson_models(std::vector<double>{3.0, 6.0, 9.0});
  LearnerConfig cfg;
  cfg.budget = 24;
  cfg.rounds = 40;
  cfg.alpha = 0.1;
  DistributionEnvironment env_a(truth);
  DistributionEnvironment env_b(truth);
  Rng a(8);
  Rng b(8);
  const auto ra = run_learning(env_a, cfg, a);
  const auto rb = run_learning(env_b, cfg, b);
  CHECK(ra.final_allocation == rb.final_allocation);
  CHECK(ra.estimates == rb.estimates);
  for (const auto& rec : ra.trace) {
    int total = 0;
    for (int x : rec.allocation) {
      CHECK(x >= 1);
      total += x;
    }
    CHECK(total <= cfg.budget);
  }

  cfg.budget = 2;
  Rng c(8);
  CHECK_THROWS_AS(run_learning(env_a, cfg, c), InvalidArgument);
}
