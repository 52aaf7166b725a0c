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

#include "ordest/metrics.h"

#include <cmath>

#include "ordest/simd/kernels.h"

namespace ordest {
namespace {

void require_same_support(const ProbVec& p, const ProbVec& q) {
  if (!(p.support() == q.support())) {
    throw Error(ErrorCode::kSupportMismatch,
                "distributions live on different supports");
  }
}

// p log(p/m) with the 0 log 0 = 0 convention; m > 0 whenever p > 0.
double xlog_ratio(double p, double m) {
  if (p <= 0.0) return 0.0;
  return p * std::log(p / m);
}

}  // namespace

std::string_view divergence_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::kMse: return "MSE";
    case DivergenceKind::kMae: return "MAE";
    case DivergenceKind::kEmd: return "EMD";
    case DivergenceKind::kKld: return "KLD";
    case DivergenceKind::kJsd: return "JSD";
  }
  return "?";
}

double mse(const ProbVec& p, const ProbVec& q) {
  require_same_support(p, q);
  return simd::sq_diff_sum(p.probs(), q.probs()) /
         static_cast<double>(p.size());
}

double mae(const ProbVec& p, const ProbVec& q) {
  require_same_support(p, q);
  return simd::abs_diff_sum(p.probs(), q.probs()) /
         static_cast<double>(p.size());
}

double emd1d(const ProbVec& p, const ProbVec& q) {
  require_same_support(p, q);
  const CumVec fp = cdf(p);
  const CumVec fq = cdf(q);
  return simd::abs_diff_sum(fp.cums(), fq.cums());
}

double kld(const ProbVec& p, const ProbVec& q) {
  require_same_support(p, q);
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      throw Error(ErrorCode::kInfiniteDivergence,
                  "q has no mass at bin " +
                      std::to_string(p.support().bin(i)) + " where p does");
    }
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

double jsd(const ProbVec& p, const ProbVec& q) {
  require_same_support(p, q);
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    // Accumulate both halves per bin in a fixed order so that swapping the
    // arguments gives a bit-identical result.
    const double a = p[i];
    const double b = q[i];
    const double m = 0.5 * (a + b);
    const double lo = a < b ? a : b;
    const double hi = a < b ? b : a;
    sum += xlog_ratio(lo, m) + xlog_ratio(hi, m);
  }
  const double value = 0.5 * sum;
  // Rounding can push identical inputs a hair below zero.
  return value < 0.0 ? 0.0 : value;
}

Divergence divergence(DivergenceKind kind, const ProbVec& p,
                      const ProbVec& q) {
  switch (kind) {
    case DivergenceKind::kMse: return {kind, mse(p, q)};
    case DivergenceKind::kMae: return {kind, mae(p, q)};
    case DivergenceKind::kEmd: return {kind, emd1d(p, q)};
    case DivergenceKind::kKld: return {kind, kld(p, q)};
    case DivergenceKind::kJsd: return {kind, jsd(p, q)};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown divergence kind");
}

bool is_stochastically_leq(const ProbVec& p, const ProbVec& q, double tol) {
  require_same_support(p, q);
  if (tol < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "order tolerance must be >= 0");
  }
  double fp = 0.0;
  double fq = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    fp += p[i];
    fq += q[i];
    if (fp < fq - tol) return false;
  }
  return true;
}

}  // namespace ordest
