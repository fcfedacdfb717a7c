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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "fairalloc/bruteforce_oracle.hpp"
#include "fairalloc/errors.hpp"
#include "test_support.hpp"

using namespace fairalloc;
using doctest::Approx;

namespace {

RandomModelInstance make(std::vector<int> sizes, std::vector<double> mus, int budget) {
  RandomModelInstance inst;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    inst.groups.push_back(Group{std::to_string(i), sizes[i]});
  inst.mus = std::move(mus);
  inst.budget = budget;
  return inst;
}

}  // namespace

TEST_CASE("sample_discovery") {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    CHECK(sample_discovery(12, 7, 12, rng) == 7);
    CHECK(sample_discovery(12, 0, 5, rng) == 0);
    const int d = sample_discovery(12, 7, 8, rng);
    CHECK(d >= 3);
    CHECK(d <= 7);
  }
  long sum = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) sum += sample_discovery(100, 50, 10, rng);
  const double mean = static_cast<double>(sum) / kDraws;
  CHECK(mean >= 4.9);
  CHECK(mean <= 5.1);
  CHECK_THROWS_AS(sample_discovery(5, 6, 1, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_discovery(5, 2, 6, rng), InvalidArgument);
}

TEST_CASE("optimal_allocation_random examples") {
  const auto a = make({10, 10}, {0.9, 0.1}, 5);
  const auto alloc = optimal_allocation_random(a);
  CHECK(alloc.units == std::vector<int>{5, 0});
  CHECK(random_utility(a, alloc) == Approx(4.5));

  const auto b = make({3, 10}, {0.9, 0.1}, 5);
  const auto alloc_b = optimal_allocation_random(b);
  CHECK(alloc_b.units == std::vector<int>{3, 2});
  CHECK(random_utility(b, alloc_b) == Approx(2.9));

  const auto c = make({3, 10}, {0.9, 0.1}, 0);
  CHECK(optimal_allocation_random(c).units == std::vector<int>{0, 0});
  CHECK(random_utility(c, optimal_allocation_random(c)) == 0.0);
}

TEST_CASE("optimal_fair_allocation_random examples") {
  SUBCASE("alpha 1") {
    const auto b = make({3, 10}, {0.9, 0.1}, 5);
    const auto fair = optimal_fair_allocation_random(b, 1.0);
    REQUIRE(fair.has_value());
    CHECK(random_utility(b, *fair) == Approx(random_utility(b, optimal_allocation_random(b))));
  }
  SUBCASE("equal sizes at alpha 0") {
    const auto e = make({6, 6, 6}, {0.5, 0.2, 0.9}, 9);
    const auto fair = optimal_fair_allocation_random(e, 0.0);
    REQUIRE(fair.has_value());
    CHECK(fair->units == std::vector<int>{3, 3, 3});
    CHECK(random_utility(e, *fair) == Approx(3 * 1.6));
  }
}

TEST_CASE("random solvers agree with enumeration") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_model_instance(rng, 3, 8, 10);
    const auto opt = optimal_allocation_random(inst);
    const auto brute = oracle::enumerate_optimal_random(inst, std::nullopt);
    REQUIRE(brute.has_value());
    CHECK(std::abs(random_utility(inst, opt) - brute->utility) <= 1e-12);
    for (double alpha : {0.0, 0.1, 0.25, 0.5, 1.0}) {
      const auto fair = optimal_fair_allocation_random(inst, alpha);
      const auto fair_brute = oracle::enumerate_optimal_random(inst, alpha);
      REQUIRE(fair.has_value() == fair_brute.has_value());
      if (!fair) continue;
      CHECK(std::abs(random_utility(inst, *fair) - fair_brute->utility) <= 1e-12);
      CHECK(random_fairness_violation(inst, *fair) <= alpha + 1e-12);
    }
  }
}

TEST_CASE("pof_closed_form") {
  CHECK(pof_closed_form(100, 200, 50, 0.0) == Approx(2.0));
  CHECK(pof_closed_form(100, 200, 50, 0.1) == Approx(200.0 / 110.0));
  CHECK(pof_closed_form(100, 200, 50, 0.5) == 1.0);
  CHECK(pof_closed_form(100, 200, 50, 0.9) == 1.0);
  CHECK_THROWS_AS(pof_closed_form(10, 20, 11, 0.1), UnsupportedParameter);
  CHECK_THROWS_AS(pof_closed_form(10, 5, 5, 0.1), InvalidArgument);
}

TEST_CASE("worst-case instances match the closed form") {
  struct Case {
    int groups;
    int budget;
    double alpha;
    double expected;
  };
  for (const auto& c : {Case{2, 10, 0.0, 2.0}, Case{2, 10, 1.0, 1.0}, Case{4, 8, 0.0, 4.0},
                        Case{2, 8, 0.5, 4.0 / 3.0}, Case{4, 8, 0.5, 1.6}}) {
    const auto inst = worst_case_instance(c.groups, c.budget, c.alpha);
    const auto pof = empirical_pof(inst, c.alpha);
    REQUIRE(pof.has_value());
    CHECK(*pof == Approx(c.expected).epsilon(1e-12));
    CHECK(pof_closed_form(c.budget, c.budget * c.groups, c.budget, c.alpha) ==
          Approx(c.expected).epsilon(1e-12));
  }
  CHECK_THROWS_AS(worst_case_instance(1, 5, 0.0), InvalidArgument);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(make({3}, {0.5, 0.2}, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(make({0}, {0.5}, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(make({3}, {1.5}, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(make({3}, {0.5}, -1).validate(), InvalidArgument);
  CHECK_NOTHROW(make({3, 4}, {0.5, 0.1}, 20).validate());
}
