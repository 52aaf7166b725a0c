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

// Convex quadratic programs with a diagonal Hessian:
//
//   minimize    1/2 sum_i d_i x_i^2 + c^T x + constant
//   subject to  A_eq x = b_eq,  A_in x <= b_in,  lo <= x <= hi
//
// with d >= 0. Strictly convex problems are solved by the dual active-set
// method of Goldfarb and Idnani. Zero-curvature coordinates are handled by
// an outer proximal-point loop that adds (rho/2)(x_i - x_i^k)^2 for those
// coordinates until the iterates stop moving, which leaves the optimum of
// the original problem unchanged.

#ifndef ORDEST_QP_H_
#define ORDEST_QP_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ordest/error.h"

namespace ordest {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearConstraint {
  std::vector<double> coeffs;  // dense row of length n
  double rhs = 0.0;
};

struct QpProblem {
  size_t n = 0;
  std::vector<double> quad_diag;  // Hessian diagonal, >= 0
  std::vector<double> lin;
  double constant = 0.0;
  std::vector<LinearConstraint> eq_constraints;    // row . x == rhs
  std::vector<LinearConstraint> ineq_constraints;  // row . x <= rhs
  std::vector<double> lo;  // may hold -kInf
  std::vector<double> hi;  // may hold +kInf

  // An unconstrained problem with objective sum_i (x_i - target_i)^2.
  static QpProblem least_squares(std::span<const double> target);

  double objective(std::span<const double> x) const;

  // Throws kInvalidArgument when the sizes or invariants are off.
  void validate() const;
};

enum class QpStatus { kOptimal, kInfeasible };

struct QpSolution {
  std::vector<double> x;
  double objective = 0.0;
  QpStatus status = QpStatus::kOptimal;
  // KKT residual for kOptimal; the minimal constraint violation found by
  // the phase-1 problem for kInfeasible.
  double kkt_residual = 0.0;
  size_t iterations = 0;
};

inline constexpr double kQpKktTol = 1e-8;
inline constexpr double kQpInfeasibleTol = 1e-7;

// Throws kNumericalFailure when the iteration cap of 50 (n + #constraints)
// is exceeded or the KKT tolerance cannot be reached.
QpSolution solve_qp(const QpProblem& prob);

// Max-norm KKT residual of `x`: primal violation, stationarity with
// sign-constrained least-squares multipliers on the active set, and
// complementarity. Zero for an exact optimum.
double kkt_residual(const QpProblem& prob, std::span<const double> x);

// Largest violation of any constraint at x.
double max_violation(const QpProblem& prob, std::span<const double> x);

}  // namespace ordest

#endif  // ORDEST_QP_H_
