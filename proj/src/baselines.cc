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
#include <string>

#include "ordest/error.h"
#include "ordest/metrics.h"
#include "ordest/rng.h"
#include "ordest/simd/kernels.h"

namespace ordest {
namespace {

// P(a <= Z < b) for standard normal Z, taking the difference in the tail
// that keeps precision.
double normal_mass(double a, double b) {
  if (a >= 0.0) {
    return 0.5 * (std::erfc(a / std::sqrt(2.0)) - std::erfc(b / std::sqrt(2.0)));
  }
  return 0.5 * (std::erfc(-b / std::sqrt(2.0)) - std::erfc(-a / std::sqrt(2.0)));
}

ProbVec point_mass(double where, const Support& support) {
  const double top = static_cast<double>(support.size() - 1);
  const double off = std::clamp(std::round(where), 0.0, top);
  std::vector<double> p(support.size(), 0.0);
  p[static_cast<size_t>(off)] = 1.0;
  return ProbVec(support, std::move(p));
}

// Offsets into the support; throws when a sample lies outside.
std::vector<size_t> offsets_of(std::span<const int64_t> samples,
                               const Support& support) {
  std::vector<size_t> out;
  out.reserve(samples.size());
  for (int64_t s : samples) {
    if (!support.contains(s)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample " + std::to_string(s) + " outside support");
    }
    out.push_back(support.offset(s));
  }
  return out;
}

// Discretized normal with the mean given as an offset, so that shifting the
// data and the support together gives identical arithmetic.
ProbVec normal_on_offsets(double mu_off, double sigma, const Support& support) {
  if (!(sigma > 0.0)) return point_mass(mu_off, support);
  std::vector<double> p(support.size());
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double c = static_cast<double>(i) - mu_off;
    p[i] = std::max(0.0, normal_mass((c - 0.5) / sigma, (c + 0.5) / sigma));
    total += p[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    return point_mass(mu_off, support);
  }
  for (double& v : p) v /= total;
  return ProbVec(support, std::move(p));
}

double sample_sd(std::span<const size_t> offs) {
  if (offs.size() < 2) return 0.0;
  double mean = 0.0;
  for (size_t o : offs) mean += static_cast<double>(o);
  mean /= static_cast<double>(offs.size());
  double ss = 0.0;
  for (size_t o : offs) {
    const double d = static_cast<double>(o) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(offs.size() - 1));
}

ProbVec kde_on_offsets(std::span<const size_t> offs, const Support& support,
                       double width) {
  const size_t n = support.size();
  std::vector<double> counts(n, 0.0);
  for (size_t o : offs) counts[o] += 1.0;
  // kernel[d + n - 1] = exp(-(d / width)^2 / 2) for d in (-n, n); the
  // normalizing constant cancels in the renormalization.
  std::vector<double> kernel(2 * n - 1);
  for (size_t idx = 0; idx < kernel.size(); ++idx) {
    const double z =
        (static_cast<double>(idx) - static_cast<double>(n - 1)) / width;
    kernel[idx] = std::exp(-0.5 * z * z);
  }
  std::vector<double> dens(n, 0.0);
  const std::span<const double> ks(kernel);
  for (size_t s = 0; s < n; ++s) {
    if (counts[s] == 0.0) continue;
    simd::axpy(counts[s], ks.subspan(n - 1 - s, n), dens);
  }
  return normalize(dens, support);
}

ProbVec empirical_of(std::span<const size_t> offs, const Support& support) {
  std::vector<double> p(support.size(), 0.0);
  const double w = 1.0 / static_cast<double>(offs.size());
  for (size_t o : offs) p[o] += w;
  return ProbVec(support, std::move(p));
}

}  // namespace

ProbVec fit_empirical(const Histogram& h) { return empirical_from_histogram(h); }

ProbVec discretized_normal(double mu, double sigma, const Support& support) {
  if (!std::isfinite(mu) || !(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "normal parameters must be finite with sigma >= 0");
  }
  return normal_on_offsets(mu - static_cast<double>(support.l()), sigma,
                           support);
}

ProbVec fit_gaussian(std::span<const int64_t> samples, const Support& support) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptySample, "no samples to fit");
  }
  const std::vector<size_t> offs = offsets_of(samples, support);
  const double n = static_cast<double>(offs.size());
  double mean = 0.0;
  for (size_t o : offs) mean += static_cast<double>(o);
  mean /= n;
  double ss = 0.0;
  for (size_t o : offs) {
    const double d = static_cast<double>(o) - mean;
    ss += d * d;
  }
  return normal_on_offsets(mean, std::sqrt(ss / n), support);
}

std::vector<double> KdeConfig::default_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

void KdeConfig::validate() const {
  if (bandwidth_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty bandwidth grid");
  }
  for (size_t i = 0; i < bandwidth_grid.size(); ++i) {
    const double h = bandwidth_grid[i];
    if (!(h > 0.0) || !std::isfinite(h) ||
        (i > 0 && !(h > bandwidth_grid[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bandwidth grid must be positive and strictly increasing");
    }
  }
  if (folds != 2) {
    throw Error(ErrorCode::kInvalidArgument, "only two folds are supported");
  }
}

double kde_kernel_width(double h, std::span<const int64_t> samples,
                        BandwidthUnit unit) {
  if (unit == BandwidthUnit::kBins) return h;
  std::vector<size_t> offs;
  offs.reserve(samples.size());
  const int64_t base = samples.empty() ? 0 : *std::min_element(samples.begin(), samples.end());
  for (int64_t s : samples) offs.push_back(static_cast<size_t>(s - base));
  return h * std::max(1.0, sample_sd(offs));
}

ProbVec kde_pmf(std::span<const int64_t> samples, const Support& support,
                double width) {
  if (samples.empty()) throw Error(ErrorCode::kEmptySample, "no samples");
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw Error(ErrorCode::kInvalidArgument, "kernel width must be positive");
  }
  return kde_on_offsets(offsets_of(samples, support), support, width);
}

KdeFit fit_kde(std::span<const int64_t> samples, const Support& support,
               const KdeConfig& cfg) {
  cfg.validate();
  if (samples.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "cross-validation needs at least two samples");
  }
  std::vector<size_t> offs = offsets_of(samples, support);
  std::vector<size_t> shuffled = offs;
  RngStream stream(cfg.seed);
  std::shuffle(shuffled.begin(), shuffled.end(), stream);
  const size_t half = shuffled.size() / 2;
  const std::span<const size_t> a(shuffled.data(), half);
  const std::span<const size_t> b(shuffled.data() + half,
                                  shuffled.size() - half);
  const ProbVec emp_a = empirical_of(a, support);
  const ProbVec emp_b = empirical_of(b, support);
  const bool scaled = cfg.unit == BandwidthUnit::kSdMultiple;
  const double sd_a = scaled ? std::max(1.0, sample_sd(a)) : 1.0;
  const double sd_b = scaled ? std::max(1.0, sample_sd(b)) : 1.0;

  double best_score = 0.0, best_h = cfg.bandwidth_grid.front();
  for (size_t g = 0; g < cfg.bandwidth_grid.size(); ++g) {
    const double h = cfg.bandwidth_grid[g];
    const double score = 0.5 * (mse(kde_on_offsets(a, support, h * sd_a), emp_b) +
                                mse(kde_on_offsets(b, support, h * sd_b), emp_a));
    if (g == 0 || score < best_score) {
      best_score = score;
      best_h = h;
    }
  }
  const double width =
      best_h * (scaled ? std::max(1.0, sample_sd(offs)) : 1.0);
  return {kde_on_offsets(offs, support, width), best_h};
}

}  // namespace ordest
