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

// Every vector variant available on the host is checked against the scalar
// reference on random inputs, including lengths that exercise the tails.

#include "ordest/simd/kernels.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace ordest::simd {
namespace {

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

std::vector<double> random_vec(std::mt19937_64& rng, size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

TEST(SimdKernelsTest, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_supported(Isa::kScalar));
  EXPECT_NO_THROW(kernels_for(Isa::kScalar));
}

TEST(SimdKernelsTest, ReductionsMatchScalarReference) {
  const KernelTable& ref = kernels_for(Isa::kScalar);
  std::mt19937_64 rng(1);
  for (Isa isa : vector_isas()) {
    SCOPED_TRACE(std::string(isa_name(isa)));
    const KernelTable& vec = kernels_for(isa);
    for (size_t n = 0; n < 70; ++n) {
      const std::vector<double> a = random_vec(rng, n);
      const std::vector<double> b = random_vec(rng, n);
      const double sq = ref.sq_diff_sum(a.data(), b.data(), n);
      const double ab = ref.abs_diff_sum(a.data(), b.data(), n);
      const double dt = ref.dot(a.data(), b.data(), n);
      double scale = 1.0;
      for (size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
      EXPECT_NEAR(vec.sq_diff_sum(a.data(), b.data(), n), sq,
                  1e-13 * (1.0 + sq));
      EXPECT_NEAR(vec.abs_diff_sum(a.data(), b.data(), n), ab,
                  1e-13 * (1.0 + ab));
      EXPECT_NEAR(vec.dot(a.data(), b.data(), n), dt, 1e-13 * scale);
    }
  }
}

TEST(SimdKernelsTest, UpdatesMatchScalarReference) {
  const KernelTable& ref = kernels_for(Isa::kScalar);
  std::mt19937_64 rng(2);
  for (Isa isa : vector_isas()) {
    SCOPED_TRACE(std::string(isa_name(isa)));
    const KernelTable& vec = kernels_for(isa);
    for (size_t n = 0; n < 40; ++n) {
      const std::vector<double> x = random_vec(rng, n);
      const std::vector<double> y0 = random_vec(rng, n);
      std::vector<double> y_ref = y0, y_vec = y0;
      ref.axpy(0.37, x.data(), y_ref.data(), n);
      vec.axpy(0.37, x.data(), y_vec.data(), n);
      for (size_t i = 0; i < n; ++i) EXPECT_NEAR(y_vec[i], y_ref[i], 1e-15);
      y_ref = y0;
      y_vec = y0;
      ref.axpy_clamp0(-1.3, x.data(), y_ref.data(), n);
      vec.axpy_clamp0(-1.3, x.data(), y_vec.data(), n);
      for (size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(y_vec[i], y_ref[i], 1e-15);
        EXPECT_GE(y_vec[i], 0.0);
      }
    }
  }
}

TEST(SimdKernelsTest, ForceIsaSwitchesDispatch) {
  const Isa before = active_isa();
  force_isa(Isa::kScalar);
  EXPECT_EQ(active_isa(), Isa::kScalar);
  EXPECT_EQ(&active_kernels(), &kernels_for(Isa::kScalar));
  const std::vector<double> a{1, 2, 3}, b{1, 0, 0};
  EXPECT_DOUBLE_EQ(sq_diff_sum(a, b), 13.0);
  force_isa(before);
  EXPECT_EQ(active_isa(), before);
  EXPECT_DOUBLE_EQ(sq_diff_sum(a, b), 13.0);
}

}  // namespace
}  // namespace ordest::simd
