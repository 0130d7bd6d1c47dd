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

#ifndef CLINVEC_SIMD_KERNELS_HPP_
#define CLINVEC_SIMD_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>

namespace clinvec::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// Raw kernel entry points. Every kernel has a scalar reference version and,
// where the CPU allows it, an AVX2 version with identical semantics. The
// elementwise kernels round identically on both paths; Dot reassociates the
// sum and so agrees only to within a few ulps.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // acc[k] = max(acc[k], x[k])
  void (*max_inplace)(const double* x, double* acc, std::size_t n);
  // acc[k] = min(acc[k], x[k])
  void (*min_inplace)(const double* x, double* acc, std::size_t n);
  // One AdaGrad step on a (main, context) vector pair whose loss gradient is
  // coef * context for main and coef * main for context. Both gradients are
  // taken before either vector moves.
  void (*adagrad_pair)(double* main, double* context, double* main_sq,
                       double* context_sq, double coef, double learning_rate,
                       double eps, std::size_t n);
};

bool IsaSupported(Isa isa);

// Table for a specific ISA; throws std::invalid_argument if unsupported.
const KernelTable& Kernels(Isa isa);

// ISA chosen for this process. Defaults to the best supported one; setting
// CLINVEC_SIMD=scalar in the environment pins the reference kernels.
Isa ActiveIsa();
// Overrides the process-wide choice (tests, benchmarking).
void SetActiveIsa(Isa isa);
const KernelTable& Active();

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().dot(a.data(), b.data(), a.size());
}

inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  Active().axpy(a, x.data(), y.data(), x.size());
}

inline void MaxInplace(std::span<const double> x, std::span<double> acc) {
  Active().max_inplace(x.data(), acc.data(), x.size());
}

inline void MinInplace(std::span<const double> x, std::span<double> acc) {
  Active().min_inplace(x.data(), acc.data(), x.size());
}

namespace scalar {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double a, const double* x, double* y, std::size_t n);
void MaxInplace(const double* x, double* acc, std::size_t n);
void MinInplace(const double* x, double* acc, std::size_t n);
void AdagradPair(double* main, double* context, double* main_sq,
                 double* context_sq, double coef, double learning_rate,
                 double eps, std::size_t n);
}  // namespace scalar

#if defined(CLINVEC_HAVE_AVX2_KERNELS)
namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double a, const double* x, double* y, std::size_t n);
void MaxInplace(const double* x, double* acc, std::size_t n);
void MinInplace(const double* x, double* acc, std::size_t n);
void AdagradPair(double* main, double* context, double* main_sq,
                 double* context_sq, double coef, double learning_rate,
                 double eps, std::size_t n);
}  // namespace avx2
#endif

}  // namespace clinvec::simd

#endif  // CLINVEC_SIMD_KERNELS_HPP_
