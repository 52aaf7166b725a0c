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
#include <limits>

#include "ordest/miqp.h"

namespace ordest {
namespace {

// Odometer over mode tuples, last position fastest.
bool next_tuple(std::vector<size_t>& modes, size_t n) {
  for (size_t pos = modes.size(); pos-- > 0;) {
    if (++modes[pos] < n) return true;
    modes[pos] = 0;
  }
  return false;
}

}  // namespace

MiqpSolution brute_force_modes(const MiqpModel& model) {
  const size_t k = model.k(), n = model.bins();
  const double tuples = std::pow(static_cast<double>(n), static_cast<double>(k));
  if (tuples > kBruteForceLimit) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(n) + "^" + std::to_string(k) +
                    " mode tuples exceed the enumeration limit");
  }
  std::vector<size_t> modes(k, 0), best_modes;
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();
  int64_t count = 0;
  for (;;) {
    const QpSolution s = solve_qp(model.fixed_mode_qp(modes));
    if (s.status != QpStatus::kOptimal) {
      throw Error(ErrorCode::kNumericalFailure,
                  "fixed-mode problem reported infeasible");
    }
    ++count;
    if (s.objective < best - 1e-12) {
      best = s.objective;
      best_x = s.x;
      best_modes = modes;
    }
    if (!next_tuple(modes, n)) break;
  }

  MiqpSolution sol;
  const Support& s = model.support();
  for (size_t j = 0; j < k; ++j) {
    std::vector<double> x(best_x.begin() + static_cast<std::ptrdiff_t>(j * n),
                          best_x.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    sol.fits.emplace_back(s, std::move(x));
    sol.modes.push_back(s.bin(best_modes[j]));
  }
  sol.objective = best;
  sol.bound = best;
  sol.root_bound = 0.0;
  sol.nodes_explored = count;
  sol.status = MiqpStatus::kOptimal;
  return sol;
}

MiqpSolution brute_force_modes(const ChainProblem& cp) {
  if (cp.k() == 1) return brute_force_modes(build_single(cp.empiricals()[0]));
  return brute_force_modes(build_chain(cp));
}

MiqpSolution brute_force_modes(const ProbVec& p) {
  return brute_force_modes(build_single(p));
}

}  // namespace ordest
