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

// Pool-adjacent-violators isotonic regression and exact least-squares
// unimodal regression of a single probability vector.
//
// A vector x is unimodal with mode m when x_l <= ... <= x_m and
// x_m >= ... >= x_u. For a fixed mode the least-squares fit is an isotonic
// regression on two chains that meet at the peak; the global fit takes the
// best mode, preferring the smallest index on ties.

#ifndef ORDEST_PAVA_H_
#define ORDEST_PAVA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ordest/core.h"

namespace ordest {

// Weighted least-squares non-decreasing fit. Throws kLengthMismatch when the
// sizes differ or are zero, kInvalidArgument for non-positive weights.
std::vector<double> isotonic_increasing(std::span<const double> values,
                                        std::span<const double> weights);

// Unit-weight overloads.
std::vector<double> isotonic_increasing(std::span<const double> values);
std::vector<double> isotonic_decreasing(std::span<const double> values);

// Least-squares fit of `values` that is non-decreasing up to `mode` and
// non-increasing after it (offsets, not bins). Preserves the sum.
std::vector<double> fixed_mode_fit(std::span<const double> values,
                                   size_t mode);

struct UnimodalFit {
  ProbVec fitted;
  int64_t mode;  // bin index
  double sse;    // sum of squared errors, |T| times the MSE
};

UnimodalFit unimodal_regression_at_mode(const ProbVec& p, int64_t mode);

UnimodalFit unimodal_regression_exact(const ProbVec& p);

// Shape check: non-decreasing on [0, mode] and non-increasing on
// [mode, size), each step allowed to violate by `tol`.
bool is_unimodal_at(std::span<const double> x, size_t mode, double tol);

}  // namespace ordest

#endif  // ORDEST_PAVA_H_
