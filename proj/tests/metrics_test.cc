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

#include "ordest/metrics.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace ordest {
namespace {

const double kLn2 = std::log(2.0);

ProbVec pv(std::vector<double> v) {
  const Support s(0, static_cast<int64_t>(v.size()) - 1);
  return ProbVec(s, std::move(v));
}

TEST(MseTest, Examples) {
  const ProbVec p = pv({0.5, 0.5});
  EXPECT_EQ(mse(p, p), 0.0);
  EXPECT_DOUBLE_EQ(mse(pv({1, 0}), pv({0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(mse(pv({0.5, 0.5}), pv({0.25, 0.75})), 0.0625);
  EXPECT_THROW(mse(pv({1, 0}), pv({1, 0, 0})), Error);
}

TEST(MaeTest, Examples) {
  const ProbVec p = pv({0.5, 0.5});
  EXPECT_EQ(mae(p, p), 0.0);
  EXPECT_DOUBLE_EQ(mae(pv({1, 0}), pv({0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(mae(pv({0.5, 0.5}), pv({0.25, 0.75})), 0.25);
}

TEST(EmdTest, Examples) {
  const ProbVec p = pv({0.2, 0.3, 0.5});
  EXPECT_EQ(emd1d(p, p), 0.0);
  EXPECT_DOUBLE_EQ(emd1d(pv({1, 0, 0, 0}), pv({0, 0, 0, 1})), 3.0);
  EXPECT_DOUBLE_EQ(emd1d(pv({0.5, 0.5, 0}), pv({0, 0.5, 0.5})), 1.0);
}

TEST(EmdTest, MatchesMinCostFlowOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 2 + trial % 5;
    const ProbVec p = testing_util::random_probvec(rng, Support(0, n - 1));
    const ProbVec q = testing_util::random_probvec(rng, Support(0, n - 1));
    EXPECT_NEAR(emd1d(p, q), testing_util::transport_cost_oracle(p, q), 1e-9);
  }
}

TEST(KldTest, Examples) {
  const ProbVec p = pv({0.3, 0.7});
  EXPECT_EQ(kld(p, p), 0.0);
  EXPECT_NEAR(kld(pv({1, 0}), pv({0.5, 0.5})), kLn2, 1e-12);
  try {
    kld(pv({0.5, 0.5}), pv({0, 1}));
    FAIL() << "expected InfiniteDivergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfiniteDivergence);
  }
}

TEST(JsdTest, Examples) {
  const ProbVec p = pv({0.3, 0.7});
  EXPECT_EQ(jsd(p, p), 0.0);
  EXPECT_NEAR(jsd(pv({1, 0}), pv({0, 1})), kLn2, 1e-12);
  EXPECT_NEAR(jsd(pv({0.5, 0.5}), pv({1, 0})), 0.215762, 1e-6);
}

TEST(JsdTest, AgreesWithKldDefinition) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const Support s(0, 1 + trial % 20);
    const ProbVec p = testing_util::random_probvec(rng, s);
    const ProbVec q = testing_util::random_probvec(rng, s);
    std::vector<double> m(s.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    const ProbVec mid(s, m);
    EXPECT_NEAR(jsd(p, q), 0.5 * kld(p, mid) + 0.5 * kld(q, mid), 1e-12);
  }
}

TEST(MetricProperties, SymmetryBoundsAndIdentity) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Support s(0, 1 + trial % 40);
    const ProbVec p = testing_util::random_probvec(rng, s, trial % 4 == 0);
    const ProbVec q = testing_util::random_probvec(rng, s, trial % 5 == 0);
    EXPECT_EQ(mse(p, q), mse(q, p));
    EXPECT_EQ(mae(p, q), mae(q, p));
    EXPECT_EQ(emd1d(p, q), emd1d(q, p));
    EXPECT_EQ(jsd(p, q), jsd(q, p));
    const double j = jsd(p, q);
    EXPECT_GE(j, 0.0);
    EXPECT_LE(j, kLn2 + 1e-12);
    EXPECT_EQ(jsd(p, p), 0.0);
    EXPECT_EQ(mse(p, p), 0.0);
    EXPECT_EQ(emd1d(p, p), 0.0);
    if (testing_util::max_abs_diff(p.probs(), q.probs()) > 1e-12) {
      EXPECT_GT(mse(p, q), 0.0);
      EXPECT_GT(mae(p, q), 0.0);
      EXPECT_GT(jsd(p, q), 0.0);
    }
  }
}

TEST(OrderTest, Examples) {
  EXPECT_TRUE(is_stochastically_leq(pv({1, 0, 0}), pv({0, 0, 1}), 0.0));
  const ProbVec p = pv({0.2, 0.5, 0.3});
  EXPECT_TRUE(is_stochastically_leq(p, p, 0.0));
  EXPECT_FALSE(is_stochastically_leq(pv({0, 1}), pv({1, 0}), 0.0));
  EXPECT_THROW(is_stochastically_leq(p, p, -1.0), Error);
}

TEST(OrderTest, AntisymmetryImpliesEquality) {
  std::mt19937_64 rng(4);
  int both = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Support s(0, 1 + trial % 4);
    // Coarse grids make ties in the CDFs likely.
    const ProbVec p = testing_util::random_grid_probvec(rng, s, 4);
    const ProbVec q = testing_util::random_grid_probvec(rng, s, 4);
    if (is_stochastically_leq(p, q, 0.0) && is_stochastically_leq(q, p, 0.0)) {
      ++both;
      for (size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-9);
    }
  }
  EXPECT_GT(both, 0);
}

}  // namespace
}  // namespace ordest
