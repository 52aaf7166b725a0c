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

#include <algorithm>
#include <cmath>
#include <utility>

#include "ordest/metrics.h"
#include "ordest/miqp.h"
#include "ordest/pava.h"

namespace ordest {

MiqpModel::MiqpModel(Support support, std::vector<ProbVec> targets)
    : support_(std::move(support)), targets_(std::move(targets)) {
  const size_t n = bins();
  for (size_t j = 0; j < k(); ++j) {
    ModelRow sum{RowKind::kSumToOne, true, {}, 1.0};
    for (size_t i = 0; i < n; ++i) sum.terms.push_back({x_index(j, i), 1.0});
    rows_.push_back(std::move(sum));
  }
  for (size_t j = 0; j < k(); ++j) {
    for (size_t i = 0; i + 1 < n; ++i) {
      rows_.push_back({RowKind::kRise,
                       false,
                       {{x_index(j, i), 1.0},
                        {x_index(j, i + 1), -1.0},
                        {y_index(j, i), 1.0}},
                       1.0});
      rows_.push_back({RowKind::kFall,
                       false,
                       {{x_index(j, i + 1), 1.0},
                        {x_index(j, i), -1.0},
                        {y_index(j, i), -1.0}},
                       0.0});
      rows_.push_back({RowKind::kStaircase,
                       false,
                       {{y_index(j, i + 1), 1.0}, {y_index(j, i), -1.0}},
                       0.0});
    }
  }
  for (size_t j = 0; j + 1 < k(); ++j) {
    for (size_t t = 0; t < n; ++t) {
      ModelRow row{RowKind::kOrder, false, {}, 0.0};
      for (size_t i = 0; i <= t; ++i) {
        row.terms.push_back({x_index(j + 1, i), 1.0});
        row.terms.push_back({x_index(j, i), -1.0});
      }
      rows_.push_back(std::move(row));
    }
  }
}

MiqpModel build_single(const ProbVec& p) {
  return MiqpModel(p.support(), {p});
}

MiqpModel build_chain(const ChainProblem& cp) {
  if (cp.k() < 2) {
    throw Error(ErrorCode::kChainTooShort,
                "a chain needs at least two distributions, got " +
                    std::to_string(cp.k()));
  }
  return MiqpModel(cp.support(), cp.empiricals());
}

size_t MiqpModel::count_rows(RowKind kind) const {
  return static_cast<size_t>(std::count_if(
      rows_.begin(), rows_.end(),
      [kind](const ModelRow& r) { return r.kind == kind; }));
}

double MiqpModel::objective(std::span<const double> vars) const {
  double total = 0.0;
  for (size_t j = 0; j < k(); ++j) {
    for (size_t i = 0; i < bins(); ++i) {
      const double d = vars[x_index(j, i)] - targets_[j][i];
      total += d * d;
    }
  }
  return total;
}

double MiqpModel::max_violation(std::span<const double> vars,
                                bool check_integrality) const {
  double worst = 0.0;
  for (double v : vars) {
    worst = std::max({worst, -v, v - 1.0});
  }
  for (const ModelRow& row : rows_) {
    double lhs = 0.0;
    for (const SparseTerm& t : row.terms) lhs += t.coeff * vars[t.var];
    const double viol =
        row.equality ? std::abs(lhs - row.rhs) : lhs - row.rhs;
    worst = std::max(worst, viol);
  }
  if (check_integrality) {
    for (size_t j = 0; j < k(); ++j) {
      for (size_t i = 0; i < bins(); ++i) {
        const double y = vars[y_index(j, i)];
        worst = std::max(worst, std::min(std::abs(y), std::abs(1.0 - y)));
      }
    }
  }
  return worst;
}

std::vector<double> MiqpModel::feasible_point() const {
  std::vector<double> v(num_vars(), 0.0);
  const double u = 1.0 / static_cast<double>(bins());
  for (size_t j = 0; j < k(); ++j) {
    for (size_t i = 0; i < bins(); ++i) {
      v[x_index(j, i)] = u;
      v[y_index(j, i)] = i + 1 < bins() ? 1.0 : 0.0;
    }
  }
  return v;
}

QpProblem MiqpModel::continuous_relaxation() const {
  const size_t nv = num_vars();
  QpProblem prob;
  prob.n = nv;
  prob.quad_diag.assign(nv, 0.0);
  prob.lin.assign(nv, 0.0);
  prob.lo.assign(nv, 0.0);
  prob.hi.assign(nv, 1.0);
  for (size_t j = 0; j < k(); ++j) {
    for (size_t i = 0; i < bins(); ++i) {
      const double p = targets_[j][i];
      prob.quad_diag[x_index(j, i)] = 2.0;
      prob.lin[x_index(j, i)] = -2.0 * p;
      prob.constant += p * p;
    }
  }
  for (const ModelRow& row : rows_) {
    LinearConstraint c{std::vector<double>(nv, 0.0), row.rhs};
    for (const SparseTerm& t : row.terms) c.coeffs[t.var] += t.coeff;
    (row.equality ? prob.eq_constraints : prob.ineq_constraints)
        .push_back(std::move(c));
  }
  return prob;
}

QpProblem MiqpModel::fixed_mode_qp(std::span<const size_t> modes) const {
  if (modes.size() != k()) {
    throw Error(ErrorCode::kLengthMismatch, "one mode per distribution");
  }
  const size_t nx = k() * bins();
  std::vector<double> y(nx, 0.0);
  for (size_t j = 0; j < k(); ++j) {
    if (modes[j] >= bins()) {
      throw Error(ErrorCode::kInvalidArgument, "mode offset out of range");
    }
    for (size_t i = 0; i < modes[j]; ++i) y[j * bins() + i] = 1.0;
  }
  QpProblem prob;
  prob.n = nx;
  prob.quad_diag.assign(nx, 2.0);
  prob.lin.assign(nx, 0.0);
  prob.lo.assign(nx, 0.0);
  prob.hi.assign(nx, 1.0);
  for (size_t j = 0; j < k(); ++j) {
    for (size_t i = 0; i < bins(); ++i) {
      const double p = targets_[j][i];
      prob.lin[x_index(j, i)] = -2.0 * p;
      prob.constant += p * p;
    }
  }
  for (const ModelRow& row : rows_) {
    LinearConstraint c{std::vector<double>(nx, 0.0), row.rhs};
    double max_lhs = 0.0;  // over the unit box
    bool has_x = false;
    for (const SparseTerm& t : row.terms) {
      if (t.var < nx) {
        c.coeffs[t.var] += t.coeff;
        max_lhs += std::max(0.0, t.coeff);
        has_x = true;
      } else {
        c.rhs -= t.coeff * y[t.var - nx];
      }
    }
    if (!has_x) continue;  // staircase rows hold by construction
    if (row.equality) {
      prob.eq_constraints.push_back(std::move(c));
    } else if (max_lhs > c.rhs) {
      prob.ineq_constraints.push_back(std::move(c));
    }
  }
  return prob;
}

std::string_view miqp_status_name(MiqpStatus s) {
  return s == MiqpStatus::kOptimal ? "Optimal" : "TimeLimit";
}

std::optional<std::string> certify_solution(const MiqpSolution& sol,
                                            double tol) {
  if (sol.fits.size() != sol.modes.size()) {
    return "fit and mode counts differ";
  }
  for (size_t j = 0; j < sol.fits.size(); ++j) {
    const ProbVec& f = sol.fits[j];
    if (!f.support().contains(sol.modes[j]) ||
        !is_unimodal_at(f.probs(), f.support().offset(sol.modes[j]), tol)) {
      return "fit " + std::to_string(j) + " is not unimodal at bin " +
             std::to_string(sol.modes[j]);
    }
  }
  for (size_t j = 0; j + 1 < sol.fits.size(); ++j) {
    if (!is_stochastically_leq(sol.fits[j], sol.fits[j + 1], tol)) {
      return "fits " + std::to_string(j) + " and " + std::to_string(j + 1) +
             " violate the stochastic order";
    }
  }
  return std::nullopt;
}

}  // namespace ordest
