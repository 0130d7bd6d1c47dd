// Copyright 2026 The clinvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLINVEC_RNG_HPP_
#define CLINVEC_RNG_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace clinvec {

// splitmix64-seeded xoshiro256**. Distribution helpers are written out here
// rather than taken from <random> so streams are identical across standard
// library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;
  explicit Rng(std::uint64_t seed);

  std::uint64_t operator()();
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);
  std::int64_t Between(std::int64_t lo, std::int64_t hi_inclusive);
  bool Bernoulli(double p) { return Uniform() < p; }
  // Knuth multiplication method; fine for the small means used here.
  int Poisson(double mean);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

// Child seed for a named stage, so each stage's stream depends only on the
// top-level seed and its label and not on what ran before it.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

}  // namespace clinvec

#endif  // CLINVEC_RNG_HPP_
