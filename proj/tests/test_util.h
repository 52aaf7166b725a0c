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

// Shared generators and independent oracles for the test suites. Nothing in
// here calls into the code paths it is used to check.

#ifndef ORDEST_TESTS_TEST_UTIL_H_
#define ORDEST_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "ordest/core.h"

namespace ordest::testing_util {

// Dirichlet(1, ..., 1)-like draw; with `sparse`, about half the bins are
// zeroed (one bin always keeps mass).
inline ProbVec random_probvec(std::mt19937_64& rng, const Support& s,
                              bool sparse = false) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution keep(0.5);
  std::vector<double> w(s.size());
  for (double& v : w) v = e(rng);
  if (sparse) {
    for (double& v : w) {
      if (!keep(rng)) v = 0.0;
    }
    std::uniform_int_distribution<size_t> pick(0, s.size() - 1);
    w[pick(rng)] += 0.5;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return ProbVec(s, w);
}

// Multiples of 1/denom, exactly representable when denom is a power of 2.
inline ProbVec random_grid_probvec(std::mt19937_64& rng, const Support& s,
                                   int denom) {
  std::vector<int> units(s.size(), 0);
  std::uniform_int_distribution<size_t> pick(0, s.size() - 1);
  for (int i = 0; i < denom; ++i) ++units[pick(rng)];
  std::vector<double> w(s.size());
  for (size_t i = 0; i < w.size(); ++i) w[i] = double(units[i]) / denom;
  return ProbVec(s, w);
}

inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Optimal transport cost between p and q with ground cost |i - j|, by
// successive shortest augmenting paths (Bellman-Ford) on the complete
// bipartite network source -> i -> j -> sink.
inline double transport_cost_oracle(const ProbVec& p, const ProbVec& q) {
  const int n = static_cast<int>(p.size());
  const int nodes = 2 * n + 2;
  const int src = 2 * n;
  const int dst = 2 * n + 1;
  struct Arc {
    int to;
    double cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Arc>> g(nodes);
  auto add = [&](int a, int b, double cap, double cost) {
    g[a].push_back({b, cap, cost, static_cast<int>(g[b].size())});
    g[b].push_back({a, 0.0, -cost, static_cast<int>(g[a].size()) - 1});
  };
  for (int i = 0; i < n; ++i) add(src, i, p[i], 0.0);
  for (int j = 0; j < n; ++j) add(n + j, dst, q[j], 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) add(i, n + j, 2.0, std::abs(i - j));
  }
  double total_cost = 0.0;
  const double eps = 1e-15;
  for (;;) {
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<int> prev_node(nodes, -1), prev_arc(nodes, -1);
    dist[src] = 0.0;
    for (int round = 0; round < nodes; ++round) {
      bool changed = false;
      for (int a = 0; a < nodes; ++a) {
        if (!std::isfinite(dist[a])) continue;
        for (int k = 0; k < static_cast<int>(g[a].size()); ++k) {
          const Arc& arc = g[a][k];
          if (arc.cap > eps && dist[a] + arc.cost < dist[arc.to] - 1e-12) {
            dist[arc.to] = dist[a] + arc.cost;
            prev_node[arc.to] = a;
            prev_arc[arc.to] = k;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!std::isfinite(dist[dst])) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = dst; v != src; v = prev_node[v]) {
      push = std::min(push, g[prev_node[v]][prev_arc[v]].cap);
    }
    for (int v = dst; v != src; v = prev_node[v]) {
      Arc& arc = g[prev_node[v]][prev_arc[v]];
      arc.cap -= push;
      g[v][arc.rev].cap += push;
    }
    total_cost += push * dist[dst];
  }
  return total_cost;
}

}  // namespace ordest::testing_util

#endif  // ORDEST_TESTS_TEST_UTIL_H_
