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

#include "ordest/pava.h"

#include <algorithm>
#include <utility>

#include "ordest/simd/kernels.h"

namespace ordest {
namespace {

struct Block {
  double sum;     // weighted sum of the pooled values
  double weight;  // total weight
  size_t len;

  double value() const { return sum / weight; }
};

// Standard stack-based PAVA; returns the blocks left to right.
std::vector<Block> pava_blocks(std::span<const double> values,
                               std::span<const double> weights) {
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    Block b{values[i] * weights[i], weights[i], 1};
    while (!blocks.empty() && blocks.back().value() > b.value()) {
      b.sum += blocks.back().sum;
      b.weight += blocks.back().weight;
      b.len += blocks.back().len;
      blocks.pop_back();
    }
    blocks.push_back(b);
  }
  return blocks;
}

std::vector<Block> pava_blocks(std::span<const double> values) {
  std::vector<double> ones(values.size(), 1.0);
  return pava_blocks(values, ones);
}

void expand(const std::vector<Block>& blocks, std::vector<double>& out) {
  for (const Block& b : blocks) out.insert(out.end(), b.len, b.value());
}

}  // namespace

std::vector<double> isotonic_increasing(std::span<const double> values,
                                        std::span<const double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "isotonic regression needs equal, non-zero lengths");
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be positive");
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  expand(pava_blocks(values, weights), out);
  return out;
}

std::vector<double> isotonic_increasing(std::span<const double> values) {
  std::vector<double> ones(values.size(), 1.0);
  return isotonic_increasing(values, ones);
}

std::vector<double> isotonic_decreasing(std::span<const double> values) {
  std::vector<double> reversed(values.rbegin(), values.rend());
  std::vector<double> fit = isotonic_increasing(reversed);
  std::reverse(fit.begin(), fit.end());
  return fit;
}

std::vector<double> fixed_mode_fit(std::span<const double> values,
                                   size_t mode) {
  const size_t n = values.size();
  if (mode >= n) {
    throw Error(ErrorCode::kInvalidArgument, "mode offset out of range");
  }
  // Left chain blocks, largest last. Right chain is pooled in reverse so
  // that its largest block (the one touching the peak) is also last.
  std::vector<Block> left = pava_blocks(values.first(mode));
  std::vector<double> right_rev(values.rbegin(),
                                values.rbegin() + (n - mode - 1));
  std::vector<Block> right = pava_blocks(right_rev);

  Block peak{values[mode], 1.0, 1};
  size_t left_pooled = 0;
  size_t right_pooled = 0;
  for (;;) {
    const bool left_viol = !left.empty() && left.back().value() > peak.value();
    const bool right_viol =
        !right.empty() && right.back().value() > peak.value();
    if (!left_viol && !right_viol) break;
    // Absorb the larger violator first; the peak value rises with each
    // merge and may settle the other side.
    bool take_left = left_viol;
    if (left_viol && right_viol) {
      take_left = left.back().value() >= right.back().value();
    }
    std::vector<Block>& side = take_left ? left : right;
    peak.sum += side.back().sum;
    peak.weight += side.back().weight;
    peak.len += side.back().len;
    (take_left ? left_pooled : right_pooled) += side.back().len;
    side.pop_back();
  }

  std::vector<double> out;
  out.reserve(n);
  expand(left, out);
  out.insert(out.end(), left_pooled + 1 + right_pooled, peak.value());
  std::vector<double> right_vals;
  expand(right, right_vals);
  out.insert(out.end(), right_vals.rbegin(), right_vals.rend());
  return out;
}

UnimodalFit unimodal_regression_at_mode(const ProbVec& p, int64_t mode) {
  if (!p.support().contains(mode)) {
    throw Error(ErrorCode::kInvalidArgument,
                "mode " + std::to_string(mode) + " outside support");
  }
  std::vector<double> fit = fixed_mode_fit(p.probs(), p.support().offset(mode));
  const double sse = simd::sq_diff_sum(fit, p.probs());
  return UnimodalFit{ProbVec(p.support(), std::move(fit)), mode, sse};
}

UnimodalFit unimodal_regression_exact(const ProbVec& p) {
  const size_t n = p.size();
  std::vector<double> best_fit;
  size_t best_mode = 0;
  double best_sse = 0.0;
  for (size_t m = 0; m < n; ++m) {
    std::vector<double> fit = fixed_mode_fit(p.probs(), m);
    const double sse = simd::sq_diff_sum(fit, p.probs());
    // Sums of squares that agree to rounding count as a tie, which keeps
    // the smaller mode.
    if (best_fit.empty() || sse < best_sse - 1e-14 * (1.0 + best_sse)) {
      best_fit = std::move(fit);
      best_mode = m;
      best_sse = sse;
    }
  }
  return UnimodalFit{ProbVec(p.support(), std::move(best_fit)),
                     p.support().bin(best_mode), best_sse};
}

bool is_unimodal_at(std::span<const double> x, size_t mode, double tol) {
  if (mode >= x.size()) return false;
  for (size_t i = 0; i < mode; ++i) {
    if (x[i] > x[i + 1] + tol) return false;
  }
  for (size_t i = mode; i + 1 < x.size(); ++i) {
    if (x[i] < x[i + 1] - tol) return false;
  }
  return true;
}

}  // namespace ordest
