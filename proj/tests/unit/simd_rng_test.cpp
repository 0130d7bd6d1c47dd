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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "clinvec/rng.hpp"
#include "clinvec/simd/kernels.hpp"

using namespace clinvec;

namespace {

std::vector<double> RandomVector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-2.0, 2.0);
  return v;
}

// Every kernel variant available on this machine, scalar first.
std::vector<simd::Isa> Variants() {
  std::vector<simd::Isa> out = {simd::Isa::kScalar};
  if (simd::IsaSupported(simd::Isa::kAvx2)) out.push_back(simd::Isa::kAvx2);
  return out;
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("kernel variants match the scalar reference on every length") {
    Rng rng(11);
    const auto& ref = simd::Kernels(simd::Isa::kScalar);
    for (simd::Isa isa : Variants()) {
      const auto& k = simd::Kernels(isa);
      CAPTURE(simd::IsaName(isa));
      for (std::size_t n = 0; n < 67; ++n) {
        const auto a = RandomVector(rng, n);
        const auto b = RandomVector(rng, n);
        double exact = 0.0;
        double magnitude = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          exact += a[i] * b[i];
          magnitude += std::abs(a[i] * b[i]);
        }
        CHECK(std::abs(k.dot(a.data(), b.data(), n) - exact) <= 1e-14 * (1.0 + magnitude));

        auto y1 = b, y2 = b;
        ref.axpy(0.37, a.data(), y1.data(), n);
        k.axpy(0.37, a.data(), y2.data(), n);
        CHECK(y1 == y2);

        auto m1 = b, m2 = b;
        ref.max_inplace(a.data(), m1.data(), n);
        k.max_inplace(a.data(), m2.data(), n);
        CHECK(m1 == m2);
        ref.min_inplace(a.data(), m1.data(), n);
        k.min_inplace(a.data(), m2.data(), n);
        CHECK(m1 == m2);

        auto w1 = a, c1 = b, w2 = a, c2 = b;
        std::vector<double> gw1(n, 0.5), gc1(n, 0.25), gw2 = gw1, gc2 = gc1;
        ref.adagrad_pair(w1.data(), c1.data(), gw1.data(), gc1.data(), -0.8, 0.05, 1e-8, n);
        k.adagrad_pair(w2.data(), c2.data(), gw2.data(), gc2.data(), -0.8, 0.05, 1e-8, n);
        CHECK(w1 == w2);
        CHECK(c1 == c2);
        CHECK(gw1 == gw2);
        CHECK(gc1 == gc2);
      }
    }
  }

  TEST_CASE("adagrad pair takes both gradients before moving") {
    double w[1] = {2.0}, c[1] = {3.0}, gw[1] = {0.0}, gc[1] = {0.0};
    simd::scalar::AdagradPair(w, c, gw, gc, 1.0, 0.1, 0.0, 1);
    // grad_w = coef * c = 3, grad_c = coef * w = 2; first step is lr * sign.
    CHECK(gw[0] == doctest::Approx(9.0));
    CHECK(gc[0] == doctest::Approx(4.0));
    CHECK(w[0] == doctest::Approx(1.9));
    CHECK(c[0] == doctest::Approx(2.9));
  }

  TEST_CASE("active isa can be pinned to the scalar kernels") {
    const simd::Isa before = simd::ActiveIsa();
    simd::SetActiveIsa(simd::Isa::kScalar);
    CHECK(simd::ActiveIsa() == simd::Isa::kScalar);
    const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
    CHECK(simd::Dot(a, b) == 32.0);
    simd::SetActiveIsa(before);
  }
}

TEST_SUITE("rng") {
  TEST_CASE("streams are reproducible and labels separate them") {
    Rng a(5), b(5), c(6);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    CHECK(Rng(5)() != c());
    CHECK(DeriveSeed(1, "glove.init") == DeriveSeed(1, "glove.init"));
    CHECK(DeriveSeed(1, "glove.init") != DeriveSeed(1, "glove.shuffle"));
    CHECK(DeriveSeed(1, "x") != DeriveSeed(2, "x"));
  }

  TEST_CASE("bounded draws stay in range and cover it") {
    Rng rng(3);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
      const auto v = rng.Below(7);
      REQUIRE(v < 7);
      ++seen[v];
    }
    for (int count : seen) CHECK(count > 800);
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.Uniform();
      CHECK((u >= 0.0 && u < 1.0));
      const auto k = rng.Between(-3, 3);
      CHECK((k >= -3 && k <= 3));
    }
  }

  TEST_CASE("poisson sample mean is close to its parameter") {
    Rng rng(9);
    double total = 0.0;
    for (int i = 0; i < 20000; ++i) total += rng.Poisson(3.0);
    CHECK(total / 20000.0 == doctest::Approx(3.0).epsilon(0.03));
  }

  TEST_CASE("shuffle is a permutation") {
    Rng rng(1);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    rng.Shuffle(std::span<int>(v));
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
    CHECK(v != sorted);
  }
}
