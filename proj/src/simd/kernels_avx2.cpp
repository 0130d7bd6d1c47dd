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

#include <immintrin.h>

#include <cmath>

#include "clinvec/simd/kernels.hpp"

// Built with -mavx2 only. Mul and add stay separate instructions so the
// elementwise kernels match the scalar ones bit for bit.

namespace clinvec::simd::avx2 {

namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_add_pd(
        acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + k + 4),
                                             _mm256_loadu_pd(b + k + 4)));
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_add_pd(
        acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

void Axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vy = _mm256_add_pd(
        _mm256_loadu_pd(y + k), _mm256_mul_pd(va, _mm256_loadu_pd(x + k)));
    _mm256_storeu_pd(y + k, vy);
  }
  for (; k < n; ++k) y[k] += a * x[k];
}

// _mm256_max_pd(a, b) returns b when either is NaN; operand order mirrors the
// scalar `x > acc ? x : acc`.
void MaxInplace(const double* x, double* acc, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vx = _mm256_loadu_pd(x + k);
    const __m256d vacc = _mm256_loadu_pd(acc + k);
    _mm256_storeu_pd(acc + k, _mm256_max_pd(vx, vacc));
  }
  for (; k < n; ++k) acc[k] = x[k] > acc[k] ? x[k] : acc[k];
}

void MinInplace(const double* x, double* acc, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vx = _mm256_loadu_pd(x + k);
    const __m256d vacc = _mm256_loadu_pd(acc + k);
    _mm256_storeu_pd(acc + k, _mm256_min_pd(vx, vacc));
  }
  for (; k < n; ++k) acc[k] = x[k] < acc[k] ? x[k] : acc[k];
}

void AdagradPair(double* main, double* context, double* main_sq,
                 double* context_sq, double coef, double learning_rate,
                 double eps, std::size_t n) {
  const __m256d vcoef = _mm256_set1_pd(coef);
  const __m256d vlr = _mm256_set1_pd(learning_rate);
  const __m256d veps = _mm256_set1_pd(eps);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d w = _mm256_loadu_pd(main + k);
    const __m256d c = _mm256_loadu_pd(context + k);
    const __m256d g_main = _mm256_mul_pd(vcoef, c);
    const __m256d g_context = _mm256_mul_pd(vcoef, w);
    const __m256d sq_main =
        _mm256_add_pd(_mm256_loadu_pd(main_sq + k), _mm256_mul_pd(g_main, g_main));
    const __m256d sq_context = _mm256_add_pd(_mm256_loadu_pd(context_sq + k),
                                             _mm256_mul_pd(g_context, g_context));
    _mm256_storeu_pd(main_sq + k, sq_main);
    _mm256_storeu_pd(context_sq + k, sq_context);
    const __m256d step_main = _mm256_div_pd(
        _mm256_mul_pd(vlr, g_main), _mm256_sqrt_pd(_mm256_add_pd(sq_main, veps)));
    const __m256d step_context =
        _mm256_div_pd(_mm256_mul_pd(vlr, g_context),
                      _mm256_sqrt_pd(_mm256_add_pd(sq_context, veps)));
    _mm256_storeu_pd(main + k, _mm256_sub_pd(w, step_main));
    _mm256_storeu_pd(context + k, _mm256_sub_pd(c, step_context));
  }
  for (; k < n; ++k) {
    const double g_main = coef * context[k];
    const double g_context = coef * main[k];
    main_sq[k] += g_main * g_main;
    context_sq[k] += g_context * g_context;
    main[k] -= learning_rate * g_main / std::sqrt(main_sq[k] + eps);
    context[k] -= learning_rate * g_context / std::sqrt(context_sq[k] + eps);
  }
}

}  // namespace clinvec::simd::avx2
