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

// Node problems of the branch and bound, in x-space.
//
// A node fixes y[j][i] = 1 for i < lo_j and y[j][i] = 0 for i >= hi_j. With
// the remaining binaries relaxed, the feasible x are exactly the pmfs that
// rise on [0, lo_j], fall on [hi_j, n) and are free in between (the rise and
// fall rows then admit a staircase y for every such x), coupled by the order
// rows. When lo_j == hi_j for all j this is the fixed-mode problem.
//
// The order rows are dualized. For multipliers lambda >= 0 the inner problem
// separates into projections onto shape-restricted simplices, which are
// closed form (pool adjacent violators, then a common shift clipped at
// zero). The dual is maximized by a projected Newton method on the piecewise
// quadratic dual; every dual value is a valid lower bound and the method
// stops when the duality gap closes.

#ifndef ORDEST_SRC_CHAIN_RELAXATION_H_
#define ORDEST_SRC_CHAIN_RELAXATION_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ordest/qp.h"

namespace ordest::internal {

struct ModeWindow {
  size_t lo;
  size_t hi;
  bool fixed() const { return lo == hi; }
};

// Euclidean projection of v onto {x : sum x = 1, x >= 0, x rises on
// [0, w.lo], falls on [w.hi, n)}.
std::vector<double> project_window(std::span<const double> v, ModeWindow w);

struct RelaxationResult {
  bool solved = false;  // x is optimal within the gap tolerance
  bool pruned = false;  // the bound reached the cutoff first
  double bound = 0.0;   // valid lower bound
  double objective = 0.0;
  std::vector<std::vector<double>> x;
  std::vector<double> lambda;
  int iterations = 0;
  bool fallback = false;
};

class ChainRelaxation {
 public:
  explicit ChainRelaxation(std::vector<std::vector<double>> targets);

  size_t k() const { return targets_.size(); }
  size_t n() const { return n_; }
  size_t num_multipliers() const { return (k() - 1) * (n_ - 1); }

  // warm may be empty. The solve stops early once the bound reaches cutoff.
  RelaxationResult solve(const std::vector<ModeWindow>& windows,
                         std::span<const double> warm, double cutoff) const;

  // Lagrangian value at lambda when each distribution also chooses its best
  // single mode inside its window. Never below the dual value at the same
  // lambda and always a lower bound for the node. Writes the minimizing
  // modes (smallest on ties).
  double mode_lagrangian(const std::vector<ModeWindow>& windows,
                         std::span<const double> lambda,
                         std::vector<size_t>& modes) const;

  double objective(const std::vector<std::vector<double>>& x) const;

  // The node problem as a generic QP over the stacked x.
  QpProblem node_qp(const std::vector<ModeWindow>& windows) const;

 private:
  struct Eval;
  void evaluate(const std::vector<ModeWindow>& windows,
                std::span<const double> lambda, Eval& e) const;
  Eigen::MatrixXd hessian_factor(const Eval& e) const;

  RelaxationResult fallback(const std::vector<ModeWindow>& windows,
                            std::span<const double> lambda) const;

  std::vector<std::vector<double>> targets_;
  size_t n_;
};

}  // namespace ordest::internal

#endif  // ORDEST_SRC_CHAIN_RELAXATION_H_
