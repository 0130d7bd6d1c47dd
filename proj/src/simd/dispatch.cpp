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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "clinvec/simd/kernels.hpp"

namespace clinvec::simd {

namespace {

constexpr KernelTable kScalarTable{&scalar::Dot, &scalar::Axpy,
                                   &scalar::MaxInplace, &scalar::MinInplace,
                                   &scalar::AdagradPair};

#if defined(CLINVEC_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{&avx2::Dot, &avx2::Axpy, &avx2::MaxInplace,
                                 &avx2::MinInplace, &avx2::AdagradPair};
#endif

Isa DetectIsa() {
  if (const char* env = std::getenv("CLINVEC_SIMD")) {
    if (std::string(env) == "scalar") return Isa::kScalar;
  }
  return IsaSupported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& ActiveSlot() {
  static std::atomic<Isa> slot{DetectIsa()};
  return slot;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(CLINVEC_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& Kernels(Isa isa) {
  if (!IsaSupported(isa)) {
    throw std::invalid_argument("SIMD kernels not supported on this CPU: " +
                                std::string(IsaName(isa)));
  }
#if defined(CLINVEC_HAVE_AVX2_KERNELS)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

Isa ActiveIsa() { return ActiveSlot().load(std::memory_order_relaxed); }

void SetActiveIsa(Isa isa) {
  Kernels(isa);  // validates
  ActiveSlot().store(isa, std::memory_order_relaxed);
}

const KernelTable& Active() { return Kernels(ActiveIsa()); }

}  // namespace clinvec::simd
