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

// Distances and divergences between probability vectors on a shared
// support, plus the first-order stochastic dominance predicate.
//
// Logarithms are natural, so jsd() lies in [0, ln 2]. Terms with p_i = 0
// contribute nothing (0 log 0 = 0).

#ifndef ORDEST_METRICS_H_
#define ORDEST_METRICS_H_

#include <string_view>

#include "ordest/core.h"

namespace ordest {

enum class DivergenceKind { kMse, kMae, kEmd, kKld, kJsd };

std::string_view divergence_name(DivergenceKind kind);

struct Divergence {
  DivergenceKind kind;
  double value;
};

// (1/|T|) sum (p_i - q_i)^2
double mse(const ProbVec& p, const ProbVec& q);

// (1/|T|) sum |p_i - q_i|
double mae(const ProbVec& p, const ProbVec& q);

// One-dimensional earth mover's distance in bin units: the L1 distance
// between the two CDFs.
double emd1d(const ProbVec& p, const ProbVec& q);

// Kullback-Leibler divergence KL(p || q). Throws kInfiniteDivergence when p
// puts mass on a bin where q has none.
double kld(const ProbVec& p, const ProbVec& q);

// Jensen-Shannon divergence; always finite.
double jsd(const ProbVec& p, const ProbVec& q);

Divergence divergence(DivergenceKind kind, const ProbVec& p, const ProbVec& q);

inline constexpr double kOrderTol = 1e-9;

// True iff p <=st q, i.e. F_p(t) >= F_q(t) - tol at every bin t.
bool is_stochastically_leq(const ProbVec& p, const ProbVec& q,
                           double tol = kOrderTol);

}  // namespace ordest

#endif  // ORDEST_METRICS_H_
