// Copyright 2026 The Ordest Authors
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

#include <atomic>
#include <cstdlib>
#include <string>

#include "ordest/error.h"
#include "ordest/simd/kernels.h"

namespace ordest::simd {
namespace {

Isa detect_isa() {
  if (const char* env = std::getenv("ORDEST_SIMD")) {
    if (std::string(env) == "scalar") return Isa::kScalar;
  }
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return Isa::kAvx2;
  }
#elif defined(__aarch64__)
  return Isa::kNeon;
#endif
  return Isa::kScalar;
}

std::atomic<Isa>& current_isa() {
  static std::atomic<Isa> isa{detect_isa()};
  return isa;
}

std::atomic<const KernelTable*>& current_table() {
  static std::atomic<const KernelTable*> table{&kernels_for(active_isa())};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("SIMD variant not supported on this CPU: ") +
                    std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2: return internal::kAvx2Kernels;
#endif
#if defined(__aarch64__)
    case Isa::kNeon: return internal::kNeonKernels;
#endif
    default: return internal::kScalarKernels;
  }
}

Isa active_isa() { return current_isa().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  current_table().store(&kernels_for(isa), std::memory_order_relaxed);
  current_isa().store(isa, std::memory_order_relaxed);
}

const KernelTable& active_kernels() {
  return *current_table().load(std::memory_order_relaxed);
}

}  // namespace ordest::simd
