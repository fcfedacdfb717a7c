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

#include <cstdint>
#include <random>

namespace fairalloc {

/// Seeded random source shared by every simulation in the library.
///
/// Wraps a 64-bit Mersenne Twister. Uniform variates are produced from the
/// raw 64-bit output with fixed bit manipulation (not std:: distributions),
/// so a given seed yields the same stream on every standard library.
/// `split` derives an independent child stream; the parent is not advanced.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();

  // Uniform integer on [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fairalloc
