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

#include "ordest/qp.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace ordest {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double violation_tol(double rhs) { return 1e-12 * (1.0 + std::abs(rhs)); }

////////////////////////////////////////////////////////////////////////////////
// Goldfarb-Idnani dual active-set method
////////////////////////////////////////////////////////////////////////////////

// Strictly convex problem in the solver's internal form:
//   min 1/2 x^T diag(h) x + a^T x  s.t.  CE^T x = ce,  CI^T x >= ci.
struct StrictQp {
  VectorXd h;  // > 0
  VectorXd a;
  MatrixXd ce_mat;  // n x me, one constraint normal per column
  VectorXd ce;
  MatrixXd ci_mat;  // n x mi
  VectorXd ci;
};

enum class GiOutcome { kOptimal, kInfeasible, kIterationLimit };

// Goldfarb-Idnani factorization: J = L^-T Q, with R the
// upper-triangular factor of the active constraint normals. Because the
// Hessian is diagonal, L^-T starts out diagonal.
class GoldfarbIdnani {
 public:
  GoldfarbIdnani(const StrictQp& qp, std::vector<bool> excluded)
      : qp_(qp),
        n_(qp.h.size()),
        excluded_(std::move(excluded)),
        J_(MatrixXd::Zero(n_, n_)),
        R_(MatrixXd::Zero(n_, n_)),
        d_(n_),
        z_(n_),
        r_(n_),
        u_(VectorXd::Zero(n_ + 1)),
        active_(n_ + 1, -1) {
    for (Index i = 0; i < n_; ++i) J_(i, i) = 1.0 / std::sqrt(qp.h(i));
  }

  GiOutcome run(size_t max_iter, VectorXd& x, size_t& iterations,
                Index& failed_constraint);

 private:
  void prepare_step(const VectorXd& np) {
    d_.noalias() = J_.transpose() * np;
    z_.noalias() = J_.rightCols(n_ - iq_) * d_.tail(n_ - iq_);
    if (iq_ > 0) {
      r_.head(iq_) = R_.topLeftCorner(iq_, iq_)
                         .triangularView<Eigen::Upper>()
                         .solve(d_.head(iq_));
    }
  }

  bool add_constraint();
  void delete_constraint(Index constraint);

  const StrictQp& qp_;
  Index n_;
  std::vector<bool> excluded_;
  MatrixXd J_;
  MatrixXd R_;
  VectorXd d_, z_, r_, u_;
  std::vector<Index> active_;  // equality i stored as -i-1
  Index iq_ = 0;
  double r_norm_ = 1.0;
};

bool GoldfarbIdnani::add_constraint() {
  // Givens rotations zeroing d[iq+1..n) so that J's first iq+1 columns span
  // the active normals.
  for (Index j = n_ - 1; j >= iq_ + 1; --j) {
    double cc = d_(j - 1);
    double ss = d_(j);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) continue;
    d_(j) = 0.0;
    ss /= h;
    cc /= h;
    if (cc < 0.0) {
      cc = -cc;
      ss = -ss;
      d_(j - 1) = -h;
    } else {
      d_(j - 1) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (Index k = 0; k < n_; ++k) {
      const double t1 = J_(k, j - 1);
      const double t2 = J_(k, j);
      J_(k, j - 1) = t1 * cc + t2 * ss;
      J_(k, j) = xny * (t1 + J_(k, j - 1)) - t2;
    }
  }
  ++iq_;
  R_.col(iq_ - 1).head(iq_) = d_.head(iq_);
  if (std::abs(d_(iq_ - 1)) <= kEps * r_norm_) return false;
  r_norm_ = std::max(r_norm_, std::abs(d_(iq_ - 1)));
  return true;
}

void GoldfarbIdnani::delete_constraint(Index constraint) {
  Index qq = -1;
  for (Index i = 0; i < iq_; ++i) {
    if (active_[i] == constraint) {
      qq = i;
      break;
    }
  }
  assert(qq >= 0);
  for (Index i = qq; i < iq_ - 1; ++i) {
    active_[i] = active_[i + 1];
    u_(i) = u_(i + 1);
    R_.col(i) = R_.col(i + 1);
  }
  active_[iq_ - 1] = active_[iq_];
  u_(iq_ - 1) = u_(iq_);
  active_[iq_] = -1;
  u_(iq_) = 0.0;
  R_.col(iq_ - 1).setZero();
  --iq_;
  if (iq_ == 0) return;
  for (Index j = qq; j < iq_; ++j) {
    double cc = R_(j, j);
    double ss = R_(j + 1, j);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) continue;
    cc /= h;
    ss /= h;
    R_(j + 1, j) = 0.0;
    if (cc < 0.0) {
      R_(j, j) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      R_(j, j) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (Index k = j + 1; k < iq_; ++k) {
      const double t1 = R_(j, k);
      const double t2 = R_(j + 1, k);
      R_(j, k) = t1 * cc + t2 * ss;
      R_(j + 1, k) = xny * (t1 + R_(j, k)) - t2;
    }
    for (Index k = 0; k < n_; ++k) {
      const double t1 = J_(k, j);
      const double t2 = J_(k, j + 1);
      J_(k, j) = t1 * cc + t2 * ss;
      J_(k, j + 1) = xny * (J_(k, j) + t1) - t2;
    }
  }
}

GiOutcome GoldfarbIdnani::run(size_t max_iter, VectorXd& x,
                              size_t& iterations, Index& failed_constraint) {
  failed_constraint = -1;
  x = -qp_.a.cwiseQuotient(qp_.h);
  const Index me = qp_.ce_mat.cols();
  const Index mi = qp_.ci_mat.cols();

  for (Index i = 0; i < me; ++i) {
    const auto np = qp_.ce_mat.col(i);
    prepare_step(np);
    const double resid = qp_.ce(i) - np.dot(x);
    if (z_.squaredNorm() <= kEps * (1.0 + np.squaredNorm())) {
      // Dependent on the equalities already active: redundant or
      // contradictory.
      if (std::abs(resid) <= 1e-10 * (1.0 + std::abs(qp_.ce(i)))) continue;
      return GiOutcome::kInfeasible;
    }
    const double t2 = resid / z_.dot(np);
    x += t2 * z_;
    u_(iq_) = t2;
    if (iq_ > 0) u_.head(iq_) -= t2 * r_.head(iq_);
    active_[iq_] = -i - 1;
    if (!add_constraint()) {
      // Numerically dependent; undo the bookkeeping and carry on.
      --iq_;
      R_.col(iq_).setZero();
      u_(iq_) = 0.0;
      active_[iq_] = -1;
    }
  }
  const Index iq_equalities = iq_;

  std::vector<bool> is_active(static_cast<size_t>(mi), false);
  VectorXd slack(mi);
  for (;;) {
    if (++iterations > max_iter) return GiOutcome::kIterationLimit;
    slack.noalias() = qp_.ci_mat.transpose() * x - qp_.ci;
    Index ip = -1;
    double worst = 0.0;
    for (Index i = 0; i < mi; ++i) {
      if (is_active[i] || excluded_[i]) continue;
      const double viol = slack(i) + violation_tol(qp_.ci(i));
      if (viol < 0.0 && slack(i) < worst) {
        worst = slack(i);
        ip = i;
      }
    }
    if (ip < 0) return GiOutcome::kOptimal;

    const auto np = qp_.ci_mat.col(ip);
    double sp = slack(ip);
    u_(iq_) = 0.0;
    for (;;) {
      prepare_step(np);
      double t1 = kInf;
      Index drop = -1;
      for (Index k = iq_equalities; k < iq_; ++k) {
        if (r_(k) > 0.0 && u_(k) / r_(k) < t1) {
          t1 = u_(k) / r_(k);
          drop = active_[k];
        }
      }
      double t2 = kInf;
      const double zn = z_.dot(np);
      if (z_.squaredNorm() > kEps * kEps && zn > 0.0) t2 = -sp / zn;
      const double t = std::min(t1, t2);
      if (t >= kInf) return GiOutcome::kInfeasible;
      if (t2 >= kInf) {
        if (iq_ > 0) u_.head(iq_) -= t * r_.head(iq_);
        u_(iq_) += t;
        is_active[drop] = false;
        delete_constraint(drop);
        continue;
      }
      x += t * z_;
      if (iq_ > 0) u_.head(iq_) -= t * r_.head(iq_);
      u_(iq_) += t;
      if (t == t2) {
        active_[iq_] = ip;
        if (!add_constraint()) {
          failed_constraint = ip;
          return GiOutcome::kIterationLimit;
        }
        is_active[ip] = true;
        break;
      }
      is_active[drop] = false;
      delete_constraint(drop);
      sp = np.dot(x) - qp_.ci(ip);
      if (++iterations > max_iter) return GiOutcome::kIterationLimit;
    }
  }
}

StrictQp to_internal(const QpProblem& prob) {
  StrictQp qp;
  const Index n = static_cast<Index>(prob.n);
  qp.h = Eigen::Map<const VectorXd>(prob.quad_diag.data(), n);
  qp.a = Eigen::Map<const VectorXd>(prob.lin.data(), n);
  const Index me = static_cast<Index>(prob.eq_constraints.size());
  qp.ce_mat.resize(n, me);
  qp.ce.resize(me);
  for (Index i = 0; i < me; ++i) {
    qp.ce_mat.col(i) =
        Eigen::Map<const VectorXd>(prob.eq_constraints[i].coeffs.data(), n);
    qp.ce(i) = prob.eq_constraints[i].rhs;
  }
  Index mi = static_cast<Index>(prob.ineq_constraints.size());
  for (size_t i = 0; i < prob.n; ++i) {
    if (std::isfinite(prob.lo[i])) ++mi;
    if (std::isfinite(prob.hi[i])) ++mi;
  }
  qp.ci_mat = MatrixXd::Zero(n, mi);
  qp.ci.resize(mi);
  Index c = 0;
  for (const LinearConstraint& row : prob.ineq_constraints) {
    qp.ci_mat.col(c) = -Eigen::Map<const VectorXd>(row.coeffs.data(), n);
    qp.ci(c) = -row.rhs;
    ++c;
  }
  for (Index i = 0; i < n; ++i) {
    if (std::isfinite(prob.lo[i])) {
      qp.ci_mat(i, c) = 1.0;
      qp.ci(c++) = prob.lo[i];
    }
    if (std::isfinite(prob.hi[i])) {
      qp.ci_mat(i, c) = -1.0;
      qp.ci(c++) = -prob.hi[i];
    }
  }
  return qp;
}

size_t iteration_cap(const QpProblem& prob) {
  return 50 * (prob.n + prob.eq_constraints.size() +
               prob.ineq_constraints.size() + 2 * prob.n);
}

// Runs Goldfarb-Idnani, restarting with a constraint excluded whenever its
// normal turns out numerically dependent on the active set.
GiOutcome solve_strict(const StrictQp& qp, size_t max_iter, VectorXd& x,
                       size_t& iterations) {
  std::vector<bool> excluded(static_cast<size_t>(qp.ci_mat.cols()), false);
  for (;;) {
    GoldfarbIdnani gi(qp, excluded);
    Index failed = -1;
    const GiOutcome out = gi.run(max_iter, x, iterations, failed);
    if (failed < 0) return out;
    excluded[failed] = true;
    if (iterations > max_iter) return GiOutcome::kIterationLimit;
  }
}

////////////////////////////////////////////////////////////////////////////////
// Non-negative least squares (Lawson-Hanson), for KKT multipliers.
////////////////////////////////////////////////////////////////////////////////

VectorXd nnls(const MatrixXd& M, const VectorXd& y) {
  const Index m = M.cols();
  VectorXd z = VectorXd::Zero(m);
  if (m == 0) return z;
  std::vector<bool> passive(static_cast<size_t>(m), false);
  const double tol = 1e-14 * (1.0 + M.cwiseAbs().maxCoeff()) *
                     (1.0 + y.cwiseAbs().maxCoeff());
  for (Index outer = 0; outer < 3 * m + 10; ++outer) {
    const VectorXd w = M.transpose() * (y - M * z);
    Index t = -1;
    double best = tol;
    for (Index j = 0; j < m; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[t] = true;
    for (Index inner = 0; inner < 3 * m + 10; ++inner) {
      std::vector<Index> idx;
      for (Index j = 0; j < m; ++j) {
        if (passive[j]) idx.push_back(j);
      }
      MatrixXd Mp(M.rows(), static_cast<Index>(idx.size()));
      for (size_t c = 0; c < idx.size(); ++c) Mp.col(c) = M.col(idx[c]);
      const VectorXd sp = Mp.colPivHouseholderQr().solve(y);
      bool all_positive = true;
      for (Index c = 0; c < sp.size(); ++c) {
        if (sp(c) <= 0.0) all_positive = false;
      }
      if (all_positive) {
        z.setZero();
        for (size_t c = 0; c < idx.size(); ++c) z(idx[c]) = sp(c);
        break;
      }
      double alpha = kInf;
      for (size_t c = 0; c < idx.size(); ++c) {
        if (sp(c) <= 0.0) {
          const double zj = z(idx[c]);
          alpha = std::min(alpha, zj / (zj - sp(c)));
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      for (size_t c = 0; c < idx.size(); ++c) {
        z(idx[c]) += alpha * (sp(c) - z(idx[c]));
      }
      for (size_t c = 0; c < idx.size(); ++c) {
        if (z(idx[c]) <= 1e-15) {
          z(idx[c]) = 0.0;
          passive[idx[c]] = false;
        }
      }
    }
  }
  return z;
}

}  // namespace

QpProblem QpProblem::least_squares(std::span<const double> target) {
  QpProblem prob;
  prob.n = target.size();
  prob.quad_diag.assign(prob.n, 2.0);
  prob.lin.resize(prob.n);
  for (size_t i = 0; i < prob.n; ++i) {
    prob.lin[i] = -2.0 * target[i];
    prob.constant += target[i] * target[i];
  }
  prob.lo.assign(prob.n, -kInf);
  prob.hi.assign(prob.n, kInf);
  return prob;
}

double QpProblem::objective(std::span<const double> x) const {
  double f = constant;
  for (size_t i = 0; i < n; ++i) {
    f += 0.5 * quad_diag[i] * x[i] * x[i] + lin[i] * x[i];
  }
  return f;
}

void QpProblem::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "QP: " + what);
  };
  if (quad_diag.size() != n || lin.size() != n || lo.size() != n ||
      hi.size() != n) {
    fail("vector sizes disagree with n");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!(quad_diag[i] >= 0.0)) fail("negative Hessian diagonal");
    if (!(lo[i] <= hi[i])) fail("lower bound above upper bound");
  }
  for (const auto* rows : {&eq_constraints, &ineq_constraints}) {
    for (const LinearConstraint& row : *rows) {
      if (row.coeffs.size() != n) fail("constraint row length");
    }
  }
}

double max_violation(const QpProblem& prob, std::span<const double> x) {
  double viol = 0.0;
  auto row_dot = [&](const LinearConstraint& row) {
    double s = 0.0;
    for (size_t i = 0; i < prob.n; ++i) s += row.coeffs[i] * x[i];
    return s;
  };
  for (const LinearConstraint& row : prob.eq_constraints) {
    viol = std::max(viol, std::abs(row_dot(row) - row.rhs));
  }
  for (const LinearConstraint& row : prob.ineq_constraints) {
    viol = std::max(viol, row_dot(row) - row.rhs);
  }
  for (size_t i = 0; i < prob.n; ++i) {
    viol = std::max(viol, prob.lo[i] - x[i]);
    viol = std::max(viol, x[i] - prob.hi[i]);
  }
  return viol;
}

double kkt_residual(const QpProblem& prob, std::span<const double> x) {
  prob.validate();
  if (x.size() != prob.n) {
    throw Error(ErrorCode::kLengthMismatch, "KKT point has wrong length");
  }
  const Index n = static_cast<Index>(prob.n);
  double residual = max_violation(prob, x);

  VectorXd grad(n);
  for (Index i = 0; i < n; ++i) {
    grad(i) = prob.quad_diag[i] * x[i] + prob.lin[i];
  }

  // Sign-constrained multipliers live on the active inequalities and
  // bounds; each column is the gradient of a constraint written as
  // g(x) <= 0.
  const double act_tol = 1e-9;
  std::vector<VectorXd> cols;
  std::vector<double> slacks;
  for (const LinearConstraint& row : prob.ineq_constraints) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += row.coeffs[i] * x[i];
    const double slack = row.rhs - s;
    if (slack <= act_tol * (1.0 + std::abs(row.rhs))) {
      cols.push_back(Eigen::Map<const VectorXd>(row.coeffs.data(), n));
      slacks.push_back(std::max(0.0, slack));
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (std::isfinite(prob.lo[i]) &&
        x[i] - prob.lo[i] <= act_tol * (1.0 + std::abs(prob.lo[i]))) {
      cols.push_back(-VectorXd::Unit(n, i));
      slacks.push_back(std::max(0.0, x[i] - prob.lo[i]));
    }
    if (std::isfinite(prob.hi[i]) &&
        prob.hi[i] - x[i] <= act_tol * (1.0 + std::abs(prob.hi[i]))) {
      cols.push_back(VectorXd::Unit(n, i));
      slacks.push_back(std::max(0.0, prob.hi[i] - x[i]));
    }
  }

  // Project out the span of the equality normals; the free equality
  // multipliers absorb that component exactly.
  const Index me = static_cast<Index>(prob.eq_constraints.size());
  MatrixXd proj = MatrixXd::Identity(n, n);
  if (me > 0) {
    MatrixXd E(n, me);
    for (Index j = 0; j < me; ++j) {
      E.col(j) =
          Eigen::Map<const VectorXd>(prob.eq_constraints[j].coeffs.data(), n);
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(E);
    const Index rank = qr.rank();
    const MatrixXd Q = MatrixXd(qr.householderQ()).leftCols(rank);
    proj -= Q * Q.transpose();
  }
  MatrixXd M(n, static_cast<Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) M.col(c) = proj * cols[c];
  const VectorXd pg = proj * grad;
  const VectorXd mu = nnls(M, -pg);
  const VectorXd stationarity = pg + M * mu;
  if (n > 0) residual = std::max(residual, stationarity.cwiseAbs().maxCoeff());
  for (size_t c = 0; c < cols.size(); ++c) {
    residual = std::max(residual, mu(c) * slacks[c]);
  }
  return residual;
}

namespace {

// Phase 1: minimize the squared constraint violation. Returns the largest
// remaining violation, which certifies infeasibility when it is positive.
double phase_one_violation(const QpProblem& prob);

QpSolution solve_qp_impl(const QpProblem& prob, bool allow_phase_one) {
  const size_t cap = iteration_cap(prob);
  StrictQp qp = to_internal(prob);
  const Index n = static_cast<Index>(prob.n);

  std::vector<Index> flat;
  double h_scale = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (prob.quad_diag[i] > 0.0) {
      h_scale = std::max(h_scale, prob.quad_diag[i]);
    } else {
      flat.push_back(i);
    }
  }
  const double rho = h_scale > 0.0 ? h_scale : 1.0;

  QpSolution sol;
  VectorXd x = VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = std::clamp(0.0, prob.lo[i], prob.hi[i]);
  }
  GiOutcome outcome = GiOutcome::kOptimal;
  const size_t max_outer = flat.empty() ? 1 : 5000;
  for (size_t outer = 0; outer < max_outer; ++outer) {
    for (Index i : flat) {
      qp.h(i) = rho;
      qp.a(i) = prob.lin[i] - rho * x(i);
    }
    VectorXd next;
    outcome = solve_strict(qp, cap, next, sol.iterations);
    if (outcome != GiOutcome::kOptimal) break;
    double move = 0.0;
    for (Index i = 0; i < n; ++i) move = std::max(move, std::abs(next(i) - x(i)));
    x = std::move(next);
    if (flat.empty()) break;
    if (move <= 1e-13 * (1.0 + x.cwiseAbs().maxCoeff())) break;
    // Cheap stopping test first; the full KKT check needs a least-squares
    // solve.
    if (move <= 1e-10 && outer % 16 == 15 &&
        kkt_residual(prob, std::span<const double>(x.data(), prob.n)) <=
            0.1 * kQpKktTol) {
      break;
    }
  }

  if (outcome == GiOutcome::kIterationLimit) {
    throw Error(ErrorCode::kNumericalFailure,
                "QP iteration cap of " + std::to_string(cap) + " exceeded");
  }
  if (outcome == GiOutcome::kInfeasible) {
    sol.status = QpStatus::kInfeasible;
    sol.x.assign(x.data(), x.data() + n);
    if (!allow_phase_one) return sol;
    sol.kkt_residual = phase_one_violation(prob);
    if (sol.kkt_residual <= kQpInfeasibleTol) {
      throw Error(ErrorCode::kNumericalFailure,
                  "dual method reported infeasibility but the phase-1 "
                  "violation is only " +
                      std::to_string(sol.kkt_residual));
    }
    return sol;
  }

  sol.x.assign(x.data(), x.data() + n);
  sol.objective = prob.objective(sol.x);
  sol.status = QpStatus::kOptimal;
  sol.kkt_residual = kkt_residual(prob, sol.x);
  if (sol.kkt_residual > kQpKktTol) {
    throw Error(ErrorCode::kNumericalFailure,
                "QP finished with KKT residual " +
                    std::to_string(sol.kkt_residual));
  }
  return sol;
}

double phase_one_violation(const QpProblem& prob) {
  // Variables (x, s_eq+, s_eq-, s_in); bounds on x stay hard since lo <= hi
  // always admits a point.
  const size_t n = prob.n;
  const size_t me = prob.eq_constraints.size();
  const size_t mi = prob.ineq_constraints.size();
  const size_t total = n + 2 * me + mi;
  QpProblem p1;
  p1.n = total;
  p1.quad_diag.assign(total, 2.0);
  for (size_t i = 0; i < n; ++i) p1.quad_diag[i] = 0.0;
  p1.lin.assign(total, 0.0);
  p1.lo.assign(total, 0.0);
  p1.hi.assign(total, kInf);
  for (size_t i = 0; i < n; ++i) {
    p1.lo[i] = prob.lo[i];
    p1.hi[i] = prob.hi[i];
  }
  for (size_t j = 0; j < me; ++j) {
    LinearConstraint row{std::vector<double>(total, 0.0),
                         prob.eq_constraints[j].rhs};
    std::copy(prob.eq_constraints[j].coeffs.begin(),
              prob.eq_constraints[j].coeffs.end(), row.coeffs.begin());
    row.coeffs[n + 2 * j] = -1.0;
    row.coeffs[n + 2 * j + 1] = 1.0;
    p1.eq_constraints.push_back(std::move(row));
  }
  for (size_t j = 0; j < mi; ++j) {
    LinearConstraint row{std::vector<double>(total, 0.0),
                         prob.ineq_constraints[j].rhs};
    std::copy(prob.ineq_constraints[j].coeffs.begin(),
              prob.ineq_constraints[j].coeffs.end(), row.coeffs.begin());
    row.coeffs[n + 2 * me + j] = -1.0;
    p1.ineq_constraints.push_back(std::move(row));
  }
  const QpSolution s = solve_qp_impl(p1, false);
  if (s.status != QpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericalFailure, "phase-1 problem failed");
  }
  return max_violation(prob, std::span<const double>(s.x.data(), n));
}

}  // namespace

QpSolution solve_qp(const QpProblem& prob) {
  prob.validate();
  return solve_qp_impl(prob, true);
}

}  // namespace ordest
