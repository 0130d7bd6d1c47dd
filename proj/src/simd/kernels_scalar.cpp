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

#include <cmath>

#include "clinvec/simd/kernels.hpp"

namespace clinvec::simd::scalar {

double Dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

void Axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void MaxInplace(const double* x, double* acc, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) acc[k] = x[k] > acc[k] ? x[k] : acc[k];
}

void MinInplace(const double* x, double* acc, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) acc[k] = x[k] < acc[k] ? x[k] : acc[k];
}

void AdagradPair(double* main, double* context, double* main_sq,
                 double* context_sq, double coef, double learning_rate,
                 double eps, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double g_main = coef * context[k];
    const double g_context = coef * main[k];
    main_sq[k] += g_main * g_main;
    context_sq[k] += g_context * g_context;
    main[k] -= learning_rate * g_main / std::sqrt(main_sq[k] + eps);
    context[k] -= learning_rate * g_context / std::sqrt(context_sq[k] + eps);
  }
}

}  // namespace clinvec::simd::scalar
