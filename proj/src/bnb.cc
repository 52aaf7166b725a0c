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
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <utility>

#include "chain_relaxation.h"
#include "ordest/miqp.h"
#include "ordest/pava.h"

namespace ordest {
namespace {

using internal::ChainRelaxation;
using internal::ModeWindow;
using internal::RelaxationResult;

constexpr double kInfD = std::numeric_limits<double>::infinity();
constexpr double kShapeTol = 1e-12;
constexpr double kCertifyTol = 1e-8;

struct Node {
  std::vector<ModeWindow> windows;
  double bound;
  uint64_t seq;
  std::shared_ptr<const std::vector<double>> lambda;
};

// Min-heap on (bound, seq).
struct LaterNode {
  bool operator()(const Node& a, const Node& b) const {
    return a.bound > b.bound || (a.bound == b.bound && a.seq > b.seq);
  }
};

struct Incumbent {
  double value = kInfD;
  std::vector<std::vector<double>> x;
  std::vector<size_t> modes;
};

bool all_fixed(const std::vector<ModeWindow>& w) {
  return std::all_of(w.begin(), w.end(),
                     [](const ModeWindow& m) { return m.fixed(); });
}

// A staircase y over [w.lo, w.hi) that completes x to a feasible point of
// the relaxed rise and fall rows. It follows the share of the window mass
// lying right of each bin, clamped into the band the rows allow.
std::vector<double> relaxed_staircase(const std::vector<double>& x,
                                      ModeWindow w) {
  const size_t len = w.hi - w.lo;
  std::vector<double> y(len);
  double mass = 0.0;
  for (size_t s = w.lo; s <= w.hi; ++s) mass += x[s];
  double right = mass;
  for (size_t r = 0; r < len; ++r) {
    const size_t i = w.lo + r;
    right -= x[i];
    y[r] = mass > 0.0 ? right / mass
                      : static_cast<double>(w.hi - i) /
                            static_cast<double>(len + 1);
  }
  // Band: y_i >= max(0, d_i) and y_i <= min(1, 1 + d_i), d_i = x_{i+1} - x_i,
  // tightened so that a non-increasing choice exists.
  std::vector<double> lo_band(len), hi_band(len);
  double run = 0.0;
  for (size_t r = len; r-- > 0;) {
    const size_t i = w.lo + r;
    run = std::max(run, std::max(0.0, x[i + 1] - x[i]));
    lo_band[r] = run;
  }
  run = 1.0;
  for (size_t r = 0; r < len; ++r) {
    const size_t i = w.lo + r;
    run = std::min(run, std::min(1.0, 1.0 + x[i + 1] - x[i]));
    hi_band[r] = run;
  }
  for (size_t r = 0; r < len; ++r) {
    y[r] = std::min(std::max(y[r], lo_band[r]), hi_band[r]);
  }
  return y;
}

std::optional<size_t> mode_in_window(const std::vector<double>& x,
                                     ModeWindow w) {
  const double top = *std::max_element(x.begin(), x.end());
  for (size_t m = w.lo; m <= w.hi; ++m) {
    if (x[m] >= top - kShapeTol && is_unimodal_at(x, m, kShapeTol)) return m;
  }
  return std::nullopt;
}

}  // namespace

MiqpSolution solve_bnb(const MiqpModel& model, const SolverOptions& opts) {
  if (!(opts.time_limit_s > 0.0) || !(opts.gap_tol >= 0.0) ||
      opts.node_limit < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid solver options");
  }
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto elapsed_s = [&] {
    return std::chrono::duration<double>(Clock::now() - started).count();
  };

  const size_t k = model.k(), n = model.bins();
  std::vector<std::vector<double>> targets(k);
  for (size_t j = 0; j < k; ++j) {
    targets[j].assign(model.targets()[j].probs().begin(),
                      model.targets()[j].probs().end());
  }
  const ChainRelaxation relax(targets);

  Incumbent inc;
  inc.x.assign(k, std::vector<double>(n, 1.0 / static_cast<double>(n)));
  inc.modes.assign(k, n - 1);
  inc.value = relax.objective(inc.x);

  std::set<std::vector<size_t>> tried;
  auto try_modes = [&](const std::vector<size_t>& modes,
                       std::span<const double> warm) {
    if (!tried.insert(modes).second) return;
    std::vector<ModeWindow> w(k);
    for (size_t j = 0; j < k; ++j) w[j] = {modes[j], modes[j]};
    const RelaxationResult r = relax.solve(w, warm, inc.value);
    if (r.solved && r.objective < inc.value) {
      inc.value = r.objective;
      inc.x = r.x;
      inc.modes = modes;
    }
  };

  std::priority_queue<Node, std::vector<Node>, LaterNode> open;
  uint64_t seq = 0;
  open.push({std::vector<ModeWindow>(k, ModeWindow{0, n - 1}), -kInfD, seq++,
             nullptr});

  MiqpSolution sol;
  sol.status = MiqpStatus::kOptimal;
  double discarded = kInfD;
  bool root = true;
  double root_bound = 0.0;

  while (!open.empty()) {
    if (sol.nodes_explored >= opts.node_limit ||
        elapsed_s() > opts.time_limit_s) {
      sol.status = MiqpStatus::kTimeLimit;
      break;
    }
    const double cutoff = inc.value - opts.gap_tol;
    if (open.top().bound >= cutoff) {
      // Best first: everything left is at least as bad.
      discarded = std::min(discarded, open.top().bound);
      while (!open.empty()) open.pop();
      break;
    }
    const Node node = open.top();
    open.pop();
    ++sol.nodes_explored;

    std::span<const double> warm;
    if (node.lambda) warm = *node.lambda;
    const RelaxationResult res = relax.solve(node.windows, warm, cutoff);
    if (root) {
      root_bound = res.bound;
      root = false;
    }
    double bound = std::max(node.bound, res.bound);
    if (res.pruned) {
      discarded = std::min(discarded, bound);
      continue;
    }

    if (all_fixed(node.windows)) {
      if (res.objective < inc.value) {
        inc.value = res.objective;
        inc.x = res.x;
        inc.modes.resize(k);
        for (size_t j = 0; j < k; ++j) inc.modes[j] = node.windows[j].lo;
      }
      continue;
    }

    // A relaxed optimum that is already unimodal settles the node.
    std::vector<size_t> found(k);
    bool feasible = true;
    for (size_t j = 0; j < k && feasible; ++j) {
      const auto m = mode_in_window(res.x[j], node.windows[j]);
      if (m) {
        found[j] = *m;
      } else {
        feasible = false;
      }
    }
    if (feasible) {
      if (res.objective < inc.value) {
        inc.value = res.objective;
        inc.x = res.x;
        inc.modes = found;
      }
      continue;
    }

    std::vector<std::vector<double>> y(k);
    std::vector<size_t> rounded(k);
    for (size_t j = 0; j < k; ++j) {
      const ModeWindow w = node.windows[j];
      rounded[j] = w.hi;
      if (w.fixed()) continue;
      y[j] = relaxed_staircase(res.x[j], w);
      for (size_t r = 0; r < y[j].size(); ++r) {
        if (y[j][r] < 0.5) {
          rounded[j] = w.lo + r;
          break;
        }
      }
    }
    try_modes(rounded, res.lambda);
    if (opts.mode_bound) {
      std::vector<size_t> lag_modes, free_modes;
      bound = std::max(
          bound, relax.mode_lagrangian(node.windows, res.lambda, lag_modes));
      bound = std::max(bound,
                       relax.mode_lagrangian(node.windows, {}, free_modes));
      try_modes(lag_modes, res.lambda);
      try_modes(free_modes, res.lambda);
    }
    if (bound >= inc.value - opts.gap_tol) {
      discarded = std::min(discarded, bound);
      continue;
    }

    // Most fractional y, ties to the smallest (j, i).
    size_t bj = k, bi = 0;
    double best_score = 0.5;
    for (size_t j = 0; j < k; ++j) {
      for (size_t r = 0; r < y[j].size(); ++r) {
        const double score = std::abs(y[j][r] - 0.5);
        if (score < best_score) {
          best_score = score;
          bj = j;
          bi = node.windows[j].lo + r;
        }
      }
    }
    if (bj == k) {
      for (size_t j = 0; j < k; ++j) {
        if (!node.windows[j].fixed()) {
          bj = j;
          bi = (node.windows[j].lo + node.windows[j].hi) / 2;
          break;
        }
      }
    }
    auto lambda = std::make_shared<const std::vector<double>>(res.lambda);
    Node down{node.windows, bound, seq++, lambda};
    down.windows[bj].hi = bi;
    Node up{node.windows, bound, seq++, lambda};
    up.windows[bj].lo = bi + 1;
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double bound = std::min(inc.value, discarded);
  while (!open.empty()) {
    bound = std::min(bound, open.top().bound);
    open.pop();
  }
  sol.bound = std::max(0.0, bound);
  sol.root_bound = std::max(0.0, root_bound);
  sol.objective = inc.value;
  if (sol.root_bound > sol.objective + 1e-9 * (1.0 + sol.objective)) {
    throw Error(ErrorCode::kNumericalFailure,
                "root relaxation exceeds the returned objective");
  }
  const Support& s = model.support();
  for (size_t j = 0; j < k; ++j) {
    sol.fits.emplace_back(s, inc.x[j]);
    sol.modes.push_back(s.bin(inc.modes[j]));
  }
  if (auto why = certify_solution(sol, kCertifyTol)) {
    throw Error(ErrorCode::kNumericalFailure, "certification failed: " + *why);
  }
  return sol;
}

}  // namespace ordest
