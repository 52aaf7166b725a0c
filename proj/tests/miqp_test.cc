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

#include "ordest/miqp.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "chain_relaxation.h"
#include "ordest/metrics.h"
#include "ordest/pava.h"
#include "test_util.h"

namespace ordest {
namespace {

ProbVec pv(std::vector<double> v) {
  const Support s(0, static_cast<int64_t>(v.size()) - 1);
  return ProbVec(s, std::move(v));
}

ChainProblem chain_of(std::vector<ProbVec> ps) {
  std::vector<std::string> labels;
  for (size_t j = 0; j < ps.size(); ++j) labels.push_back("s" + std::to_string(j));
  const Support s = ps[0].support();
  return ChainProblem(s, std::move(ps), std::move(labels));
}

MiqpModel model_of(std::vector<ProbVec> ps) {
  if (ps.size() == 1) return build_single(ps[0]);
  return build_chain(chain_of(std::move(ps)));
}

// Empirical pmf of n draws from a rounded normal, clamped to the support.
ProbVec sampled_empirical(std::mt19937_64& rng, const Support& s, double mu,
                          double sd, int n) {
  std::normal_distribution<double> nd(mu, sd);
  std::vector<double> w(s.size(), 0.0);
  for (int t = 0; t < n; ++t) {
    const double v = std::round(nd(rng));
    const int64_t bin = std::clamp<int64_t>(static_cast<int64_t>(v), s.l(), s.u());
    w[s.offset(bin)] += 1.0;
  }
  return normalize(w, s);
}

void expect_certified(const MiqpSolution& sol) {
  const auto why = certify_solution(sol, 1e-8);
  EXPECT_FALSE(why.has_value()) << *why;
  EXPECT_GE(sol.objective, sol.bound - 1e-6);
  EXPECT_LE(sol.root_bound, sol.objective + 1e-9);
}

TEST(MiqpModelTest, SingleModelCounts) {
  const MiqpModel m3 = build_single(pv({0.2, 0.3, 0.5}));
  EXPECT_EQ(m3.count_rows(RowKind::kSumToOne), 1u);
  EXPECT_EQ(m3.count_rows(RowKind::kRise), 2u);
  EXPECT_EQ(m3.count_rows(RowKind::kFall), 2u);
  EXPECT_EQ(m3.count_rows(RowKind::kStaircase), 2u);
  EXPECT_EQ(m3.count_rows(RowKind::kOrder), 0u);
  EXPECT_EQ(m3.num_binaries(), 3u);

  const MiqpModel m2 = build_single(pv({0.5, 0.5}));
  EXPECT_EQ(m2.count_rows(RowKind::kRise), 1u);
  EXPECT_EQ(m2.count_rows(RowKind::kFall), 1u);
  EXPECT_EQ(m2.count_rows(RowKind::kStaircase), 1u);
}

TEST(MiqpModelTest, ChainModelCounts) {
  const ProbVec p = pv({0.2, 0.3, 0.5});
  const MiqpModel m = build_chain(chain_of({p, p}));
  EXPECT_EQ(m.count_rows(RowKind::kOrder), 3u);
  EXPECT_EQ(m.count_rows(RowKind::kSumToOne), 2u);
  EXPECT_EQ(m.count_rows(RowKind::kRise) + m.count_rows(RowKind::kFall) +
                m.count_rows(RowKind::kStaircase),
            3u * 2u * 2u);

  const Support big(-50, 50);
  const ProbVec u(big, std::vector<double>(101, 1.0 / 101));
  EXPECT_EQ(build_chain(chain_of({u, u, u})).count_rows(RowKind::kOrder), 202u);

  try {
    build_chain(chain_of({p}));
    FAIL() << "expected ChainTooShort";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kChainTooShort);
  }
}

TEST(MiqpModelTest, UniformPointIsAlwaysFeasible) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const Support s(0, 1 + trial % 9);
    std::vector<ProbVec> ps;
    for (int j = 0; j < 1 + trial % 4; ++j) {
      ps.push_back(testing_util::random_probvec(rng, s));
    }
    const MiqpModel m = model_of(ps);
    EXPECT_LE(m.max_violation(m.feasible_point(), true), 1e-12);
  }
}

TEST(MiqpModelTest, ZeroObjectiveExactlyForUnimodalTargets) {
  const ProbVec uni = pv({0.1, 0.4, 0.3, 0.2});
  const MiqpModel m = build_single(uni);
  std::vector<double> v(m.num_vars(), 0.0);
  for (size_t i = 0; i < 4; ++i) v[m.x_index(0, i)] = uni[i];
  v[m.y_index(0, 0)] = 1.0;  // peak at bin 1
  EXPECT_EQ(m.objective(v), 0.0);
  EXPECT_LE(m.max_violation(v, true), 1e-15);

  // No staircase makes a bimodal target feasible.
  const ProbVec bi = pv({0.4, 0.1, 0.5});
  const MiqpModel mb = build_single(bi);
  std::vector<double> w(mb.num_vars(), 0.0);
  for (size_t i = 0; i < 3; ++i) w[mb.x_index(0, i)] = bi[i];
  for (size_t mode = 0; mode < 3; ++mode) {
    for (size_t i = 0; i < 3; ++i) w[mb.y_index(0, i)] = i < mode ? 1.0 : 0.0;
    EXPECT_GT(mb.max_violation(w, true), 0.1);
  }
}

TEST(SolveBnbTest, Examples) {
  const ProbVec uni = pv({0.1, 0.4, 0.3, 0.2});
  const MiqpSolution a = solve_bnb(build_single(uni));
  EXPECT_NEAR(a.objective, 0.0, 1e-12);
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(a.fits[0][i], uni[i], 1e-9);
  expect_certified(a);

  const MiqpSolution b = solve_bnb(build_chain(chain_of({pv({0, 1}), pv({1, 0})})));
  EXPECT_EQ(b.status, MiqpStatus::kOptimal);
  EXPECT_NEAR(b.objective, 1.0, 1e-9);
  for (const ProbVec& f : b.fits) {
    EXPECT_NEAR(f[0], 0.5, 1e-9);
    EXPECT_NEAR(f[1], 0.5, 1e-9);
  }
  expect_certified(b);

  const MiqpSolution c = solve_bnb(build_single(pv({0.4, 0.1, 0.5})));
  EXPECT_NEAR(c.objective, 0.045, 1e-12);
  EXPECT_NEAR(c.fits[0][0], 0.25, 1e-9);
  EXPECT_NEAR(c.fits[0][1], 0.25, 1e-9);
  EXPECT_NEAR(c.fits[0][2], 0.5, 1e-9);
  EXPECT_EQ(c.modes[0], 2);
  expect_certified(c);
}

TEST(SolveBnbTest, RejectsBadOptions) {
  SolverOptions o;
  o.time_limit_s = 0.0;
  EXPECT_THROW(solve_bnb(build_single(pv({0.5, 0.5})), o), Error);
}

TEST(BruteForceTest, Examples) {
  const MiqpSolution b = brute_force_modes(chain_of({pv({0, 1}), pv({1, 0})}));
  EXPECT_NEAR(b.objective, 1.0, 1e-9);

  const Support s(0, 49);
  const ProbVec u(s, std::vector<double>(50, 0.02));
  try {
    brute_force_modes(chain_of({u, u, u}));
    FAIL() << "expected TooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(BruteForceTest, MatchesUnimodalRegressionForSingleTargets) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Support s(0, 1 + trial % 7);
    const ProbVec p = testing_util::random_probvec(rng, s, trial % 2 == 0);
    EXPECT_NEAR(brute_force_modes(p).objective,
                unimodal_regression_exact(p).sse, 1e-8);
  }
}

class BnbOracleTest : public ::testing::TestWithParam<bool> {};

TEST_P(BnbOracleTest, MatchesBruteForceOnSmallChains) {
  SolverOptions opts;
  opts.mode_bound = GetParam();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t k = 1 + trial % 3;
    const Support s(0, 3 + (trial / 3) % 7);
    std::vector<ProbVec> ps;
    for (size_t j = 0; j < k; ++j) {
      ps.push_back(testing_util::random_probvec(rng, s, trial % 4 == 0));
    }
    const MiqpModel m = model_of(ps);
    const MiqpSolution bnb = solve_bnb(m, opts);
    const MiqpSolution brute = brute_force_modes(m);
    EXPECT_EQ(bnb.status, MiqpStatus::kOptimal);
    EXPECT_NEAR(bnb.objective, brute.objective, 1e-6) << "trial " << trial;
    expect_certified(bnb);
  }
}

TEST_P(BnbOracleTest, MatchesUnimodalRegressionForSingleTargets) {
  SolverOptions opts;
  opts.mode_bound = GetParam();
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int64_t size = GetParam() ? 2 + (trial * 37) % 199 : 2 + (trial * 7) % 59;
    const Support s(0, size - 1);
    const ProbVec p = trial % 2 == 0
                          ? testing_util::random_probvec(rng, s, trial % 4 == 0)
                          : sampled_empirical(rng, s, size / 2.0, size / 6.0, 30);
    const MiqpSolution bnb = solve_bnb(build_single(p), opts);
    const UnimodalFit exact = unimodal_regression_exact(p);
    EXPECT_EQ(bnb.status, MiqpStatus::kOptimal);
    EXPECT_NEAR(bnb.objective, exact.sse, 1e-8) << "trial " << trial;
    expect_certified(bnb);
  }
}

INSTANTIATE_TEST_SUITE_P(ModeBound, BnbOracleTest, ::testing::Bool());

TEST(SolveBnbTest, RootBoundEqualsGenericRelaxation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    const size_t k = 1 + trial % 3;
    const Support s(0, 2 + trial % 5);
    std::vector<ProbVec> ps;
    for (size_t j = 0; j < k; ++j) ps.push_back(testing_util::random_probvec(rng, s));
    const MiqpModel m = model_of(ps);
    const QpSolution relaxed = solve_qp(m.continuous_relaxation());
    ASSERT_EQ(relaxed.status, QpStatus::kOptimal);
    const MiqpSolution sol = solve_bnb(m);
    EXPECT_NEAR(sol.root_bound, relaxed.objective, 1e-7) << "trial " << trial;
    EXPECT_LE(relaxed.objective, sol.objective + 1e-8);
  }
}

TEST(SolveBnbTest, OrderConstraintsOnlyAddCost) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Support s(-10, 10);
    std::vector<ProbVec> ps;
    double independent = 0.0;
    for (int j = 0; j < 3; ++j) {
      ps.push_back(sampled_empirical(rng, s, -3.0 + 3.0 * j, 3.0, 10));
      independent += solve_bnb(build_single(ps.back())).objective;
    }
    const MiqpSolution chain = solve_bnb(model_of(ps));
    EXPECT_GE(chain.objective, independent - 1e-8);
    expect_certified(chain);
  }
}

TEST(SolveBnbTest, DeterministicAcrossRuns) {
  std::mt19937_64 rng(9);
  const Support s(-20, 20);
  std::vector<ProbVec> ps;
  for (int j = 0; j < 4; ++j) ps.push_back(sampled_empirical(rng, s, -6.0 + 4.0 * j, 5.0, 10));
  const MiqpModel m = model_of(ps);
  const MiqpSolution a = solve_bnb(m);
  const MiqpSolution b = solve_bnb(m);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.nodes_explored, b.nodes_explored);
  EXPECT_EQ(a.modes, b.modes);
  for (size_t j = 0; j < a.fits.size(); ++j) EXPECT_EQ(a.fits[j].values(), b.fits[j].values());
}

TEST(SolveBnbTest, SparseSurrogateChains) {
  std::mt19937_64 rng(10);
  const Support s(-50, 50);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = trial % 2 == 0 ? 3 : 6;
    std::vector<ProbVec> ps;
    for (int j = 0; j < k; ++j) {
      ps.push_back(sampled_empirical(rng, s, 10.0 * (j - (k - 1) / 2.0),
                                     std::sqrt(50.0), 10));
    }
    const MiqpSolution sol = solve_bnb(model_of(ps));
    EXPECT_EQ(sol.status, MiqpStatus::kOptimal);
    expect_certified(sol);
  }
}

TEST(SolveBnbTest, TimeLimitReturnsIncumbent) {
  std::mt19937_64 rng(11);
  const Support s(-50, 50);
  std::vector<ProbVec> ps;
  for (int j = 0; j < 6; ++j) ps.push_back(sampled_empirical(rng, s, 4.0 * j - 10, 7.0, 10));
  SolverOptions o;
  o.node_limit = 1;
  const MiqpSolution sol = solve_bnb(model_of(ps), o);
  expect_certified(sol);
  EXPECT_LE(sol.bound, sol.objective);
}

// Structured node relaxations against the generic solver.

TEST(ChainRelaxationTest, ProjectionMatchesGenericQp) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd(0.0, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + trial % 12;
    std::vector<double> v(n);
    for (double& x : v) x = nd(rng);
    const size_t lo = std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    const size_t hi = std::uniform_int_distribution<size_t>(lo, n - 1)(rng);
    const std::vector<double> x = internal::project_window(v, {lo, hi});
    QpProblem q = QpProblem::least_squares(v);
    q.eq_constraints.push_back({std::vector<double>(n, 1.0), 1.0});
    std::fill(q.lo.begin(), q.lo.end(), 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
      if (i >= lo && i < hi) continue;
      std::vector<double> row(n, 0.0);
      const double dir = i < lo ? 1.0 : -1.0;
      row[i] = dir;
      row[i + 1] = -dir;
      q.ineq_constraints.push_back({row, 0.0});
    }
    const QpSolution s = solve_qp(q);
    ASSERT_EQ(s.status, QpStatus::kOptimal);
    EXPECT_LE(testing_util::max_abs_diff(x, s.x), 1e-8) << "trial " << trial;
  }
}

TEST(ChainRelaxationTest, NodeSolvesMatchGenericQp) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 120; ++trial) {
    const size_t k = 2 + trial % 3;
    const Support s(0, 4 + trial % 15);
    const size_t n = s.size();
    std::vector<std::vector<double>> targets;
    std::vector<internal::ModeWindow> windows;
    for (size_t j = 0; j < k; ++j) {
      const ProbVec p = trial % 3 == 0
                            ? testing_util::random_probvec(rng, s, true)
                            : sampled_empirical(rng, s, (n * (j + 1.0)) / (k + 1.0),
                                                n / 5.0, 10);
      targets.emplace_back(p.probs().begin(), p.probs().end());
      const size_t lo = std::uniform_int_distribution<size_t>(0, n - 1)(rng);
      const size_t hi = trial % 4 == 0
                            ? lo
                            : std::uniform_int_distribution<size_t>(lo, n - 1)(rng);
      windows.push_back({lo, hi});
    }
    const internal::ChainRelaxation relax(targets);
    const internal::RelaxationResult r =
        relax.solve(windows, {}, std::numeric_limits<double>::infinity());
    ASSERT_TRUE(r.solved);
    const QpSolution g = solve_qp(relax.node_qp(windows));
    ASSERT_EQ(g.status, QpStatus::kOptimal);
    EXPECT_NEAR(r.objective, g.objective, 1e-8) << "trial " << trial;
    EXPECT_LE(r.bound, g.objective + 1e-9);
    EXPECT_GE(r.bound, g.objective - 1e-8);
    EXPECT_FALSE(r.fallback) << "trial " << trial;
    std::vector<size_t> modes;
    EXPECT_GE(relax.mode_lagrangian(windows, r.lambda, modes), r.bound - 1e-9);
  }
}

}  // namespace
}  // namespace ordest
