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

// Unimodal, stochastically ordered fits of a chain of empirical pmfs as a
// mixed-integer quadratic program.
//
// Variables are x[j][i] (the fitted pmfs) and binaries y[j][i], where
// y[j][i] = 1 means bin i lies before the peak of distribution j. The model
// keeps the rows explicitly so that it can be inspected and relaxed, while
// solve_bnb works on an equivalent structured form of the same problem.

#ifndef ORDEST_MIQP_H_
#define ORDEST_MIQP_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordest/core.h"
#include "ordest/qp.h"

namespace ordest {

enum class RowKind {
  kSumToOne,    // sum_i x[j][i] == 1
  kRise,        // x[j][i] - x[j][i+1] + y[j][i] <= 1
  kFall,        // x[j][i+1] - x[j][i] - y[j][i] <= 0
  kStaircase,   // y[j][i+1] - y[j][i] <= 0
  kOrder,       // sum_{i<=t} x[j+1][i] - sum_{i<=t} x[j][i] <= 0
};

struct SparseTerm {
  size_t var;
  double coeff;
};

struct ModelRow {
  RowKind kind;
  bool equality;  // otherwise terms . v <= rhs
  std::vector<SparseTerm> terms;
  double rhs;
};

class MiqpModel {
 public:
  const Support& support() const { return support_; }
  size_t k() const { return targets_.size(); }
  size_t bins() const { return support_.size(); }
  const std::vector<ProbVec>& targets() const { return targets_; }
  const std::vector<ModelRow>& rows() const { return rows_; }

  size_t num_vars() const { return 2 * k() * bins(); }
  size_t x_index(size_t j, size_t i) const { return j * bins() + i; }
  size_t y_index(size_t j, size_t i) const { return (k() + j) * bins() + i; }

  size_t count_rows(RowKind kind) const;
  size_t num_binaries() const { return k() * bins(); }

  // Sum of squared errors of the x block against the targets.
  double objective(std::span<const double> vars) const;

  // Largest violation over rows, the [0, 1] boxes and (when requested)
  // integrality of the y block.
  double max_violation(std::span<const double> vars,
                       bool check_integrality) const;

  // Uniform x with the staircase y that puts every peak at u.
  std::vector<double> feasible_point() const;

  // The model with y relaxed to [0, 1], as a QP over all variables.
  QpProblem continuous_relaxation() const;

  // The QP over x alone obtained by fixing each y[j] to the staircase of
  // the given mode offsets. Rows that the boxes already imply are dropped.
  QpProblem fixed_mode_qp(std::span<const size_t> modes) const;

 private:
  friend MiqpModel build_single(const ProbVec& p);
  friend MiqpModel build_chain(const ChainProblem& cp);
  MiqpModel(Support support, std::vector<ProbVec> targets);

  Support support_;
  std::vector<ProbVec> targets_;
  std::vector<ModelRow> rows_;
};

MiqpModel build_single(const ProbVec& p);

// Throws kChainTooShort when cp.k() < 2.
MiqpModel build_chain(const ChainProblem& cp);

struct SolverOptions {
  double time_limit_s = 60.0;
  double gap_tol = 1e-6;
  int64_t node_limit = 1000000;
  // Tighten node bounds with the Lagrangian in which each distribution
  // picks its best mode inside its window.
  bool mode_bound = true;
};

enum class MiqpStatus { kOptimal, kTimeLimit };

std::string_view miqp_status_name(MiqpStatus s);

struct MiqpSolution {
  std::vector<ProbVec> fits;
  std::vector<int64_t> modes;  // bins
  double objective = 0.0;      // sum of squared errors
  double bound = 0.0;          // proved lower bound
  double root_bound = 0.0;     // continuous relaxation at the root
  int64_t nodes_explored = 0;
  MiqpStatus status = MiqpStatus::kOptimal;
};

// Best-first branch and bound. Deterministic for a fixed model and options
// unless a limit is hit. Throws kNumericalFailure if the returned fits fail
// certification.
MiqpSolution solve_bnb(const MiqpModel& model, const SolverOptions& opts = {});

// Enumerates every mode tuple and solves each fixed-mode QP with solve_qp.
// Throws kTooLarge when |T|^k exceeds kBruteForceLimit.
inline constexpr double kBruteForceLimit = 1e5;
MiqpSolution brute_force_modes(const MiqpModel& model);
MiqpSolution brute_force_modes(const ChainProblem& cp);
MiqpSolution brute_force_modes(const ProbVec& p);

// Returns a description of the first violated property, if any: each fit
// unimodal at its reported mode and adjacent fits stochastically ordered.
std::optional<std::string> certify_solution(const MiqpSolution& sol,
                                            double tol);

}  // namespace ordest

#endif  // ORDEST_MIQP_H_
