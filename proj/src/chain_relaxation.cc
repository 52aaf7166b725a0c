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

#include "chain_relaxation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <Eigen/Dense>

#include "ordest/error.h"
#include "ordest/simd/kernels.h"

namespace ordest::internal {
namespace {

constexpr double kFeasTol = 1e-10;
constexpr double kGapTol = 1e-10;
constexpr double kLooseTol = 1e-9;
constexpr int kMaxNewton = 200;
constexpr int kMaxBacktrack = 60;
constexpr double kStepCap = 10.0;

struct Block {
  size_t start;
  size_t len;
  double sum;
  double value() const { return sum / static_cast<double>(len); }
};

// Pools v[begin, end) into monotone blocks appended to out.
void pool(std::span<const double> v, size_t begin, size_t end, bool rising,
          std::vector<Block>& out) {
  const size_t base = out.size();
  for (size_t i = begin; i < end; ++i) {
    Block b{i, 1, v[i]};
    while (out.size() > base) {
      const Block& p = out.back();
      const double lhs = p.sum * static_cast<double>(b.len);
      const double rhs = b.sum * static_cast<double>(p.len);
      if (rising ? !(lhs > rhs) : !(lhs < rhs)) break;
      b.start = p.start;
      b.len += p.len;
      b.sum += p.sum;
      out.pop_back();
    }
    out.push_back(b);
  }
}

// Blocks of the least-squares fit of v under the window shape, without the
// simplex constraint.
void shape_blocks(std::span<const double> v, ModeWindow w,
                  std::vector<Block>& out, std::vector<Block>& scratch) {
  const size_t n = v.size();
  out.clear();
  if (!w.fixed()) {
    pool(v, 0, w.lo + 1, true, out);
    for (size_t i = w.lo + 1; i < w.hi; ++i) out.push_back({i, 1, v[i]});
    pool(v, w.hi, n, false, out);
    return;
  }
  const size_t m = w.lo;
  pool(v, 0, m, true, out);
  scratch.clear();
  pool(v, m + 1, n, false, scratch);
  Block peak{m, 1, v[m]};
  size_t r = 0;
  for (;;) {
    const bool left = !out.empty() && out.back().value() > peak.value();
    const bool right = r < scratch.size() && scratch[r].value() > peak.value();
    if (!left && !right) break;
    // Absorb the larger violator first.
    if (left && (!right || out.back().value() >= scratch[r].value())) {
      peak.start = out.back().start;
      peak.len += out.back().len;
      peak.sum += out.back().sum;
      out.pop_back();
    } else {
      peak.len += scratch[r].len;
      peak.sum += scratch[r].sum;
      ++r;
    }
  }
  out.push_back(peak);
  out.insert(out.end(), scratch.begin() + static_cast<std::ptrdiff_t>(r),
             scratch.end());
}

// The shift mu with sum_b len_b * max(0, value_b - mu) == 1.
double unit_mass_shift(const std::vector<Block>& blocks,
                       std::vector<size_t>& order) {
  order.resize(blocks.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double va = blocks[a].value(), vb = blocks[b].value();
    return va > vb || (va == vb && a < b);
  });
  double sum = 0.0, len = 0.0, mu = 0.0;
  for (size_t idx = 0; idx < order.size(); ++idx) {
    const Block& b = blocks[order[idx]];
    sum += b.sum;
    len += static_cast<double>(b.len);
    const double cand = (sum - 1.0) / len;
    if (idx > 0 && !(b.value() > cand)) break;
    mu = cand;
  }
  return mu;
}

void write_projection(const std::vector<Block>& blocks, double mu,
                      std::vector<double>& x) {
  for (const Block& b : blocks) {
    const double val = std::max(0.0, b.value() - mu);
    std::fill_n(x.begin() + static_cast<std::ptrdiff_t>(b.start), b.len, val);
  }
}

}  // namespace

std::vector<double> project_window(std::span<const double> v, ModeWindow w) {
  if (w.lo > w.hi || w.hi >= v.size()) {
    throw Error(ErrorCode::kInvalidArgument, "window out of range");
  }
  std::vector<Block> blocks, scratch;
  std::vector<size_t> order;
  shape_blocks(v, w, blocks, scratch);
  const double mu = unit_mass_shift(blocks, order);
  std::vector<double> x(v.size());
  write_projection(blocks, mu, x);
  return x;
}

struct ChainRelaxation::Eval {
  std::vector<std::vector<Block>> blocks;
  std::vector<std::vector<char>> positive;  // per block
  std::vector<double> npos;                 // positive bins per distribution
  std::vector<std::vector<double>> c;
  std::vector<std::vector<double>> x;
  std::vector<double> h;
  double f = 0.0;
  double g = 0.0;
};

ChainRelaxation::ChainRelaxation(std::vector<std::vector<double>> targets)
    : targets_(std::move(targets)) {
  if (targets_.empty() || targets_[0].size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "empty relaxation");
  }
  n_ = targets_[0].size();
  for (const auto& t : targets_) {
    if (t.size() != n_) {
      throw Error(ErrorCode::kLengthMismatch, "targets differ in length");
    }
  }
}

double ChainRelaxation::objective(
    const std::vector<std::vector<double>>& x) const {
  double total = 0.0;
  for (size_t j = 0; j < k(); ++j) total += simd::sq_diff_sum(x[j], targets_[j]);
  return total;
}

namespace {

// c_j = Lambda_{j-1} - Lambda_j with Lambda_j(i) = sum_{t >= i} lambda_j(t).
void linear_terms(std::span<const double> lambda, size_t k, size_t n,
                  std::vector<std::vector<double>>& c) {
  c.resize(k);
  for (auto& row : c) row.assign(n, 0.0);
  for (size_t j = 0; j + 1 < k; ++j) {
    double run = 0.0;
    for (size_t t = n - 1; t-- > 0;) {
      run += lambda[j * (n - 1) + t];
      c[j][t] -= run;
      c[j + 1][t] += run;
    }
  }
}

}  // namespace

void ChainRelaxation::evaluate(const std::vector<ModeWindow>& windows,
                               std::span<const double> lambda,
                               Eval& e) const {
  const size_t kk = k(), n = n_;
  linear_terms(lambda, kk, n, e.c);
  e.blocks.resize(kk);
  e.positive.resize(kk);
  e.npos.assign(kk, 0.0);
  e.x.resize(kk);
  std::vector<double> v(n);
  std::vector<Block> scratch;
  std::vector<size_t> order;
  e.f = 0.0;
  e.g = 0.0;
  for (size_t j = 0; j < kk; ++j) {
    for (size_t i = 0; i < n; ++i) v[i] = targets_[j][i] - 0.5 * e.c[j][i];
    shape_blocks(v, windows[j], e.blocks[j], scratch);
    const double mu = unit_mass_shift(e.blocks[j], order);
    e.x[j].resize(n);
    write_projection(e.blocks[j], mu, e.x[j]);
    e.positive[j].resize(e.blocks[j].size());
    for (size_t b = 0; b < e.blocks[j].size(); ++b) {
      const bool pos = e.blocks[j][b].value() - mu > 0.0;
      e.positive[j][b] = pos;
      if (pos) e.npos[j] += static_cast<double>(e.blocks[j][b].len);
    }
    const double fj = simd::sq_diff_sum(e.x[j], targets_[j]);
    e.f += fj;
    e.g += fj + simd::dot(e.c[j], e.x[j]);
  }
  e.h.assign(num_multipliers(), 0.0);
  for (size_t j = 0; j + 1 < kk; ++j) {
    double lo = 0.0, hi = 0.0;
    for (size_t t = 0; t + 1 < n; ++t) {
      lo += e.x[j][t];
      hi += e.x[j + 1][t];
      e.h[j * (n - 1) + t] = hi - lo;
    }
  }
}

// U with M = U U^T, where M = B R B^T / 2 and h(lambda) is locally
// h0 - M lambda. R_j = G_j G_j^T has one column per positive block,
// 1_b / sqrt|b| - sqrt|b| / |P| * 1_P.
Eigen::MatrixXd ChainRelaxation::hessian_factor(const Eval& e) const {
  const size_t n = n_, kk = k();
  size_t r = 0;
  for (size_t j = 0; j < kk; ++j) {
    for (char p : e.positive[j]) r += p ? 1 : 0;
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_multipliers()),
                                            static_cast<Eigen::Index>(r));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<double> g(n);
  Eigen::Index col = 0;
  for (size_t j = 0; j < kk; ++j) {
    const double npos = e.npos[j];
    for (size_t b = 0; b < e.blocks[j].size(); ++b) {
      if (!e.positive[j][b]) continue;
      const Block& blk = e.blocks[j][b];
      const double len = static_cast<double>(blk.len);
      const double common = std::sqrt(len) / npos;
      std::fill(g.begin(), g.end(), 0.0);
      for (size_t q = 0; q < e.blocks[j].size(); ++q) {
        if (!e.positive[j][q]) continue;
        const Block& other = e.blocks[j][q];
        std::fill_n(g.begin() + static_cast<std::ptrdiff_t>(other.start),
                    other.len, -common);
      }
      for (size_t i = blk.start; i < blk.start + blk.len; ++i) {
        g[i] += 1.0 / std::sqrt(len);
      }
      double run = 0.0;
      for (size_t t = 0; t + 1 < n; ++t) {
        run += g[t];
        const double v = run * inv_sqrt2;
        if (j > 0) u(static_cast<Eigen::Index>((j - 1) * (n - 1) + t), col) += v;
        if (j + 1 < kk) u(static_cast<Eigen::Index>(j * (n - 1) + t), col) -= v;
      }
      ++col;
    }
  }
  return u;
}

QpProblem ChainRelaxation::node_qp(
    const std::vector<ModeWindow>& windows) const {
  const size_t kk = k(), n = n_, nx = kk * n;
  QpProblem prob;
  prob.n = nx;
  prob.quad_diag.assign(nx, 2.0);
  prob.lin.resize(nx);
  prob.lo.assign(nx, 0.0);
  prob.hi.assign(nx, 1.0);
  for (size_t j = 0; j < kk; ++j) {
    for (size_t i = 0; i < n; ++i) {
      prob.lin[j * n + i] = -2.0 * targets_[j][i];
      prob.constant += targets_[j][i] * targets_[j][i];
    }
    LinearConstraint sum{std::vector<double>(nx, 0.0), 1.0};
    for (size_t i = 0; i < n; ++i) sum.coeffs[j * n + i] = 1.0;
    prob.eq_constraints.push_back(std::move(sum));
    for (size_t i = 0; i + 1 < n; ++i) {
      if (i >= windows[j].lo && i < windows[j].hi) continue;
      LinearConstraint c{std::vector<double>(nx, 0.0), 0.0};
      const double dir = i < windows[j].lo ? 1.0 : -1.0;
      c.coeffs[j * n + i] = dir;
      c.coeffs[j * n + i + 1] = -dir;
      prob.ineq_constraints.push_back(std::move(c));
    }
  }
  for (size_t j = 0; j + 1 < kk; ++j) {
    for (size_t t = 0; t + 1 < n; ++t) {
      LinearConstraint c{std::vector<double>(nx, 0.0), 0.0};
      for (size_t i = 0; i <= t; ++i) {
        c.coeffs[(j + 1) * n + i] = 1.0;
        c.coeffs[j * n + i] = -1.0;
      }
      prob.ineq_constraints.push_back(std::move(c));
    }
  }
  return prob;
}

RelaxationResult ChainRelaxation::fallback(
    const std::vector<ModeWindow>& windows,
    std::span<const double> lambda) const {
  const QpSolution sol = solve_qp(node_qp(windows));
  RelaxationResult r;
  r.solved = true;
  r.fallback = true;
  r.x.resize(k());
  for (size_t j = 0; j < k(); ++j) {
    r.x[j].assign(sol.x.begin() + static_cast<std::ptrdiff_t>(j * n_),
                  sol.x.begin() + static_cast<std::ptrdiff_t>((j + 1) * n_));
    for (double& v : r.x[j]) v = std::clamp(v, 0.0, 1.0);
  }
  r.objective = objective(r.x);
  r.bound = r.objective - kQpKktTol * (1.0 + r.objective);
  r.lambda.assign(lambda.begin(), lambda.end());
  return r;
}

RelaxationResult ChainRelaxation::solve(const std::vector<ModeWindow>& windows,
                                        std::span<const double> warm,
                                        double cutoff) const {
  if (windows.size() != k()) {
    throw Error(ErrorCode::kLengthMismatch, "one window per distribution");
  }
  const size_t m = num_multipliers();
  std::vector<double> lambda(m, 0.0);
  if (warm.size() == m) {
    for (size_t t = 0; t < m; ++t) lambda[t] = std::max(0.0, warm[t]);
  }
  Eval e, trial;
  evaluate(windows, lambda, e);

  RelaxationResult r;
  auto finish = [&](bool solved, bool pruned) {
    r.solved = solved;
    r.pruned = pruned;
    r.bound = e.g;
    r.objective = e.f;
    r.x = e.x;
    r.lambda = lambda;
    return r;
  };

  std::vector<size_t> free_set;
  std::vector<double> d(m), next(m);
  double reg = 1e-10;
  bool stalled = false;
  for (int it = 0; it < kMaxNewton; ++it) {
    r.iterations = it;
    double viol = 0.0, resid = 0.0;
    for (size_t t = 0; t < m; ++t) {
      viol = std::max(viol, e.h[t]);
      resid = std::max(resid, std::abs(lambda[t] - std::max(0.0, lambda[t] + e.h[t])));
    }
    const double gap = e.f - e.g;
    if (e.g >= cutoff) return finish(false, true);
    if (viol <= kFeasTol && gap <= kGapTol * (1.0 + e.f)) {
      return finish(true, false);
    }
    // Near the optimum the dual is flat to rounding; settle for the loose
    // tolerance once progress stalls.
    if (stalled && viol <= kLooseTol && gap <= kLooseTol * (1.0 + e.f)) {
      return finish(true, false);
    }
    // Multipliers at (or near) zero whose gradient points outward stay put.
    const double eps = std::min(1e-6, resid);
    free_set.clear();
    for (size_t t = 0; t < m; ++t) {
      if (!(lambda[t] <= eps && e.h[t] < 0.0)) free_set.push_back(t);
    }
    const size_t nf = free_set.size();
    const Eigen::MatrixXd u = hessian_factor(e);
    Eigen::MatrixXd uf(static_cast<Eigen::Index>(nf), u.cols());
    Eigen::VectorXd hf(static_cast<Eigen::Index>(nf));
    double scale = 0.0;
    for (size_t a = 0; a < nf; ++a) {
      const auto row = static_cast<Eigen::Index>(a);
      uf.row(row) = u.row(static_cast<Eigen::Index>(free_set[a]));
      hf(row) = e.h[free_set[a]];
      scale = std::max(scale, uf.row(row).squaredNorm());
    }
    // (U_F U_F^T + shift I) d = h_F through the eigenpairs (s, v) of the
    // small Gram matrix U_F^T U_F: the range of U_F is spanned by U_F v /
    // sqrt(s). Flat stretches of the dual leave M singular; the shift keeps
    // the step finite and the cap keeps it in the range where the inner
    // problem moves.
    const double shift = reg * std::max(scale, 1.0);
    Eigen::VectorXd df = hf / shift;
    if (uf.cols() > 0 && nf > 0) {
      const Eigen::MatrixXd gram = uf.transpose() * uf;
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
      const Eigen::VectorXd& ev = eig.eigenvalues();
      const Eigen::VectorXd z = eig.eigenvectors().transpose() * (uf.transpose() * hf);
      const double floor = 1e-12 * std::max(ev.maxCoeff(), 0.0);
      Eigen::VectorXd coef = Eigen::VectorXd::Zero(ev.size());
      for (Eigen::Index c = 0; c < ev.size(); ++c) {
        if (!(ev(c) > floor)) continue;
        // Range part z/(s + shift) minus the part h / shift already holds.
        coef(c) = z(c) / ev(c) * (1.0 / (ev(c) + shift) - 1.0 / shift);
      }
      df += uf * (eig.eigenvectors() * coef);
    }
    const double gstep = 1.0 / std::max(scale, 1.0);
    for (size_t t = 0; t < m; ++t) d[t] = e.h[t] * gstep;
    for (size_t a = 0; a < nf; ++a) {
      const double v = df(static_cast<Eigen::Index>(a));
      d[free_set[a]] = std::isfinite(v) ? v : e.h[free_set[a]] * gstep;
    }
    double lmax = 0.0, dmax = 0.0;
    for (size_t t = 0; t < m; ++t) {
      lmax = std::max(lmax, lambda[t]);
      dmax = std::max(dmax, std::abs(d[t]));
    }
    const double cap = kStepCap * (1.0 + lmax);
    if (dmax > cap) {
      for (double& v : d) v *= cap / dmax;
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        // Newton failed: projected gradient instead.
        for (size_t t = 0; t < m; ++t) d[t] = e.h[t] * gstep;
      }
      alpha = 1.0;
      for (int ls = 0; ls < kMaxBacktrack; ++ls, alpha *= 0.5) {
        double pred = 0.0;
        for (size_t t = 0; t < m; ++t) {
          next[t] = std::max(0.0, lambda[t] + alpha * d[t]);
          pred += e.h[t] * (next[t] - lambda[t]);
        }
        if (!(pred > 0.0)) continue;
        evaluate(windows, next, trial);
        // g is concave along the segment, so a nonnegative slope at its end
        // also certifies ascent when the change is below rounding.
        double slope = 0.0;
        for (size_t t = 0; t < m; ++t) slope += trial.h[t] * (next[t] - lambda[t]);
        if ((trial.g >= e.g + 1e-4 * pred && trial.g >= e.g) || slope >= 0.0) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
    reg = alpha == 1.0 ? std::max(1e-14, reg * 0.1)
                       : std::min(1e-2, reg * (alpha < 0.1 ? 100.0 : 10.0));
    stalled = trial.g - e.g <= 1e-14 * (1.0 + std::abs(e.g));
    lambda.swap(next);
    std::swap(e, trial);
  }

  double viol = 0.0;
  for (double v : e.h) viol = std::max(viol, v);
  if (e.g >= cutoff) return finish(false, true);
  if (viol <= kLooseTol && e.f - e.g <= kLooseTol * (1.0 + e.f)) {
    return finish(true, false);
  }
  RelaxationResult fb = fallback(windows, lambda);
  fb.bound = std::max(fb.bound, e.g);
  fb.iterations = r.iterations;
  return fb;
}

double ChainRelaxation::mode_lagrangian(const std::vector<ModeWindow>& windows,
                                        std::span<const double> lambda,
                                        std::vector<size_t>& modes) const {
  const size_t n = n_;
  std::vector<std::vector<double>> c;
  std::vector<double> zero;
  if (lambda.size() != num_multipliers()) {
    zero.assign(num_multipliers(), 0.0);
    lambda = zero;
  }
  linear_terms(lambda, k(), n, c);
  modes.assign(k(), 0);
  std::vector<double> v(n), x(n);
  std::vector<Block> blocks, scratch;
  std::vector<size_t> order;
  double total = 0.0;
  for (size_t j = 0; j < k(); ++j) {
    for (size_t i = 0; i < n; ++i) v[i] = targets_[j][i] - 0.5 * c[j][i];
    double best = std::numeric_limits<double>::infinity();
    double lowest = best;
    for (size_t mode = windows[j].lo; mode <= windows[j].hi; ++mode) {
      shape_blocks(v, {mode, mode}, blocks, scratch);
      write_projection(blocks, unit_mass_shift(blocks, order), x);
      const double val =
          simd::sq_diff_sum(x, targets_[j]) + simd::dot(c[j], x);
      lowest = std::min(lowest, val);
      if (val < best - 1e-14 * (1.0 + std::abs(best))) {
        best = val;
        modes[j] = mode;
      }
    }
    total += lowest;
  }
  return total;
}

}  // namespace ordest::internal
