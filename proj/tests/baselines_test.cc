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


#include "ordest/baselines.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ordest/error.h"
#include "ordest/metrics.h"
#include "ordest/rng.h"
#include "test_util.h"

namespace ordest {
namespace {

double phi_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

// Direct CDF differences on the bins, renormalized.
std::vector<double> normal_oracle(double mu, double sigma, const Support& s) {
  std::vector<double> w(s.size());
  double total = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    const double x = static_cast<double>(s.bin(i));
    w[i] = phi_cdf((x + 0.5 - mu) / sigma) - phi_cdf((x - 0.5 - mu) / sigma);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> kde_oracle(const std::vector<int64_t>& xs, const Support& s,
                               double width) {
  std::vector<double> w(s.size(), 0.0);
  double total = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    for (int64_t x : xs) {
      const double d = static_cast<double>(s.bin(i) - x) / width;
      w[i] += std::exp(-0.5 * d * d);
    }
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

double mse_oracle(const std::vector<double>& a, const ProbVec& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

ProbVec empirical_oracle(const std::vector<int64_t>& xs, const Support& s) {
  std::vector<double> w(s.size(), 0.0);
  for (int64_t x : xs) w[s.offset(x)] += 1.0;
  for (double& v : w) v /= static_cast<double>(xs.size());
  return ProbVec(s, w);
}

std::vector<int64_t> normal_samples(std::mt19937_64& rng, const Support& s,
                                    double mu, double sd, int n) {
  std::normal_distribution<double> nd(mu, sd);
  std::vector<int64_t> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(std::clamp<int64_t>(std::llround(nd(rng)), s.l(), s.u()));
  }
  return out;
}

void expect_valid(const ProbVec& p) {
  double total = 0.0;
  for (double v : p.probs()) {
    EXPECT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(FitEmpiricalTest, Examples) {
  const ProbVec a = fit_empirical(Histogram(Support(0, 1), {1, 3}));
  EXPECT_DOUBLE_EQ(a[0], 0.25);
  EXPECT_DOUBLE_EQ(a[1], 0.75);
  const ProbVec b = fit_empirical(Histogram(Support(0, 3), {5, 0, 0, 5}));
  EXPECT_EQ(b.values(), (std::vector<double>{0.5, 0, 0, 0.5}));
  try {
    fit_empirical(Histogram(Support(0, 1), {0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroMass);
  }
}

TEST(FitGaussianTest, ConstantSamplesGivePointMass) {
  const Support s(0, 9);
  const std::vector<int64_t> xs(6, 5);
  const ProbVec p = fit_gaussian(xs, s);
  for (size_t i = 0; i < s.size(); ++i) EXPECT_EQ(p[i], i == 5 ? 1.0 : 0.0);
}

TEST(FitGaussianTest, SymmetricSamples) {
  const Support s(-3, 3);
  const ProbVec p = fit_gaussian(std::vector<int64_t>{-1, 1}, s);
  for (int64_t t = 0; t <= 3; ++t) EXPECT_NEAR(p.at_bin(t), p.at_bin(-t), 1e-15);
  EXPECT_EQ(s.bin(p.argmax()), 0);
  const auto want = normal_oracle(0.0, 1.0, s);
  EXPECT_LT(testing_util::max_abs_diff(p.probs(), want), 1e-12);
}

TEST(FitGaussianTest, WorkedExample) {
  const Support s(0, 4);
  const ProbVec p = fit_gaussian(std::vector<int64_t>{0, 0, 0, 2}, s);
  const auto want = normal_oracle(0.5, std::sqrt(0.75), s);
  EXPECT_LT(testing_util::max_abs_diff(p.probs(), want), 1e-12);
  const int64_t mode = s.bin(p.argmax());
  EXPECT_TRUE(mode == 0 || mode == 1);
  expect_valid(p);
}

TEST(FitGaussianTest, MatchesOracleOnRandomSamples) {
  std::mt19937_64 rng(11);
  const Support s(-30, 30);
  for (int c = 0; c < 100; ++c) {
    std::uniform_real_distribution<double> mu(-20, 20), sd(0.5, 12);
    const auto xs = normal_samples(rng, s, mu(rng), sd(rng), 2 + c % 40);
    const double m =
        std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double v = 0.0;
    for (int64_t x : xs) v += (double(x) - m) * (double(x) - m);
    v /= static_cast<double>(xs.size());
    const ProbVec p = fit_gaussian(xs, s);
    expect_valid(p);
    if (v == 0.0) continue;
    EXPECT_LT(testing_util::max_abs_diff(p.probs(), normal_oracle(m, std::sqrt(v), s)),
              1e-9);
  }
}

TEST(FitGaussianTest, TranslationEquivariant) {
  std::mt19937_64 rng(5);
  const Support s(-10, 10);
  for (int c = 0; c < 50; ++c) {
    const auto xs = normal_samples(rng, s, 0.0, 3.0, 12);
    const int64_t shift = static_cast<int64_t>(c) * 37 - 900;
    std::vector<int64_t> moved(xs);
    for (int64_t& x : moved) x += shift;
    const ProbVec p = fit_gaussian(xs, s);
    const ProbVec q = fit_gaussian(moved, Support(s.l() + shift, s.u() + shift));
    EXPECT_EQ(p.values(), q.values());
  }
}

TEST(FitGaussianTest, Errors) {
  const Support s(0, 4);
  try {
    fit_gaussian(std::vector<int64_t>{}, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySample);
  }
  EXPECT_THROW(fit_gaussian(std::vector<int64_t>{7}, s), Error);
}

TEST(FitGaussianTest, ErrorShrinksWithSampleSize) {
  const Support s(-50, 50);
  const ProbVec truth(s, normal_oracle(3.0, std::sqrt(50.0), s));
  double prev = 1.0;
  for (int n : {10, 100, 1000}) {
    std::vector<double> scores;
    for (uint64_t seed = 0; seed < 50; ++seed) {
      std::mt19937_64 rng(seed * 7919 + static_cast<uint64_t>(n));
      scores.push_back(jsd(fit_gaussian(normal_samples(rng, s, 3.0, std::sqrt(50.0), n), s),
                           truth));
    }
    std::nth_element(scores.begin(), scores.begin() + 25, scores.end());
    EXPECT_LE(scores[25], prev);
    prev = scores[25];
  }
}

TEST(KdeTest, DefaultGrid) {
  const auto g = KdeConfig::default_grid();
  ASSERT_EQ(g.size(), 19u);
  for (size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], 0.05 * double(i + 1), 1e-12);
}

TEST(KdeTest, ConfigValidation) {
  KdeConfig c;
  EXPECT_NO_THROW(c.validate());
  c.bandwidth_grid = {};
  EXPECT_THROW(c.validate(), Error);
  c.bandwidth_grid = {0.2, 0.1};
  EXPECT_THROW(c.validate(), Error);
  c.bandwidth_grid = {0.0, 0.1};
  EXPECT_THROW(c.validate(), Error);
  c = KdeConfig{};
  c.folds = 3;
  EXPECT_THROW(c.validate(), Error);
}

TEST(KdeTest, KernelWidth) {
  const std::vector<int64_t> xs{0, 2, 4, 6};
  EXPECT_DOUBLE_EQ(kde_kernel_width(0.3, xs, BandwidthUnit::kBins), 0.3);
  const double sd = std::sqrt(20.0 / 3.0);
  EXPECT_NEAR(kde_kernel_width(0.5, xs, BandwidthUnit::kSdMultiple), 0.5 * sd, 1e-12);
  EXPECT_DOUBLE_EQ(
      kde_kernel_width(0.5, std::vector<int64_t>{3, 3}, BandwidthUnit::kSdMultiple), 0.5);
}

TEST(KdeTest, PmfMatchesDirectSum) {
  std::mt19937_64 rng(3);
  const Support s(-20, 20);
  for (int c = 0; c < 50; ++c) {
    const auto xs = normal_samples(rng, s, 0.0, 6.0, 1 + c);
    const double width = 0.05 + 0.4 * c;
    const ProbVec p = kde_pmf(xs, s, width);
    expect_valid(p);
    EXPECT_LT(testing_util::max_abs_diff(p.probs(), kde_oracle(xs, s, width)), 1e-12);
  }
}

TEST(KdeTest, RepeatedValueIsSymmetric) {
  const Support s(0, 6);
  const std::vector<int64_t> xs{3, 3, 3, 3};
  for (double h : KdeConfig::default_grid()) {
    KdeConfig one;
    one.bandwidth_grid = {h};
    for (BandwidthUnit u : {BandwidthUnit::kBins, BandwidthUnit::kSdMultiple}) {
      one.unit = u;
      const KdeFit f = fit_kde(xs, s, one);
      EXPECT_EQ(f.bandwidth, h);
      EXPECT_EQ(s.bin(f.pmf.argmax()), 3);
      for (int64_t t = 1; t <= 3; ++t) {
        EXPECT_NEAR(f.pmf.at_bin(3 - t), f.pmf.at_bin(3 + t), 1e-15);
      }
    }
  }
}

// Scores every grid value from scratch. The chosen value must attain the
// minimum (up to rounding) with no smaller value strictly better, and the
// final pmf is the refit on all samples.
TEST(KdeTest, CrossValidationMatchesOracle) {
  std::mt19937_64 rng(17);
  const Support s(-40, 40);
  for (int c = 0; c < 40; ++c) {
    const auto xs = normal_samples(rng, s, 0.0, 2.0 + c % 9, 2 + c % 30);
    KdeConfig cfg;
    cfg.seed = static_cast<uint64_t>(c);
    cfg.unit = c % 2 ? BandwidthUnit::kSdMultiple : BandwidthUnit::kBins;
    std::vector<int64_t> perm(xs);
    RngStream stream(cfg.seed);
    std::shuffle(perm.begin(), perm.end(), stream);
    const size_t half = perm.size() / 2;
    const std::vector<int64_t> a(perm.begin(), perm.begin() + std::ptrdiff_t(half));
    const std::vector<int64_t> b(perm.begin() + std::ptrdiff_t(half), perm.end());
    const auto& g = cfg.bandwidth_grid;
    std::vector<double> score;
    for (double h : g) {
      score.push_back(
          0.5 * (mse_oracle(kde_oracle(a, s, kde_kernel_width(h, a, cfg.unit)),
                            empirical_oracle(b, s)) +
                 mse_oracle(kde_oracle(b, s, kde_kernel_width(h, b, cfg.unit)),
                            empirical_oracle(a, s))));
    }
    const double best = *std::min_element(score.begin(), score.end());
    const KdeFit f = fit_kde(xs, s, cfg);
    const auto at = std::find(g.begin(), g.end(), f.bandwidth);
    ASSERT_NE(at, g.end());
    const size_t chosen = static_cast<size_t>(at - g.begin());
    EXPECT_LE(score[chosen], best + 1e-14);
    for (size_t i = 0; i < chosen; ++i) EXPECT_GE(score[i], score[chosen] - 1e-14);
    EXPECT_LT(testing_util::max_abs_diff(
                  f.pmf.probs(), kde_oracle(xs, s, kde_kernel_width(f.bandwidth, xs, cfg.unit))),
              1e-12);
  }
}

TEST(KdeTest, DeterministicPerSeed) {
  std::mt19937_64 rng(23);
  const Support s(-30, 30);
  const auto xs = normal_samples(rng, s, 0.0, 5.0, 15);
  KdeConfig cfg;
  cfg.seed = 99;
  const KdeFit a = fit_kde(xs, s, cfg);
  const KdeFit b = fit_kde(xs, s, cfg);
  EXPECT_EQ(a.pmf.values(), b.pmf.values());
  EXPECT_EQ(a.bandwidth, b.bandwidth);
}

TEST(KdeTest, Errors) {
  const Support s(0, 4);
  try {
    fit_kde(std::vector<int64_t>{1}, s, KdeConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSamples);
  }
  EXPECT_THROW(kde_pmf(std::vector<int64_t>{1}, s, 0.0), Error);
}

}  // namespace
}  // namespace ordest
