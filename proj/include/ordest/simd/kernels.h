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

// Dense double-precision inner loops used by the metrics, the kernel
// density baseline and the chain relaxation.
//
// Each kernel has a scalar reference implementation and vectorized variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is chosen once at
// startup from the CPU feature bits; setting ORDEST_SIMD=scalar in the
// environment pins the scalar path. Vector variants reassociate sums, so
// results agree with the scalar reference to rounding, not bit for bit.

#ifndef ORDEST_SIMD_KERNELS_H_
#define ORDEST_SIMD_KERNELS_H_

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace ordest::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  // sum_i (a_i - b_i)^2
  double (*sq_diff_sum)(const double* a, const double* b, size_t n);
  // sum_i |a_i - b_i|
  double (*abs_diff_sum)(const double* a, const double* b, size_t n);
  // sum_i a_i * b_i
  double (*dot)(const double* a, const double* b, size_t n);
  // y_i += alpha * x_i
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  // y_i = max(0, y_i + alpha * x_i)
  void (*axpy_clamp0)(double alpha, const double* x, double* y, size_t n);
};

bool isa_supported(Isa isa);

// Kernel table for a specific ISA. The ISA must be supported.
const KernelTable& kernels_for(Isa isa);

// The ISA selected at startup, or the one set by force_isa().
Isa active_isa();

// Overrides the dispatch decision process-wide. Intended for tests and
// benchmarks; not synchronized with concurrent kernel calls.
void force_isa(Isa isa);

const KernelTable& active_kernels();

inline double sq_diff_sum(std::span<const double> a,
                          std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().sq_diff_sum(a.data(), b.data(), a.size());
}

inline double abs_diff_sum(std::span<const double> a,
                           std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().abs_diff_sum(a.data(), b.data(), a.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  assert(x.size() == y.size());
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline void axpy_clamp0(double alpha, std::span<const double> x,
                        std::span<double> y) {
  assert(x.size() == y.size());
  active_kernels().axpy_clamp0(alpha, x.data(), y.data(), x.size());
}

namespace internal {
extern const KernelTable kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonKernels;
#endif
}  // namespace internal

}  // namespace ordest::simd

#endif  // ORDEST_SIMD_KERNELS_H_
