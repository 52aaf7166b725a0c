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


// Comparison estimators: the empirical pmf, a discretized Gaussian maximum
// likelihood fit and a Gaussian kernel density estimate whose bandwidth is
// chosen by two-fold cross-validation.

#ifndef ORDEST_BASELINES_H_
#define ORDEST_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ordest/core.h"

namespace ordest {

ProbVec fit_empirical(const Histogram& h);

// Normal(mu, sigma^2) discretized on unit bins [i - 1/2, i + 1/2) by CDF
// differences and renormalized over the support. sigma == 0, or a
// distribution with no representable mass on the support, gives the point
// mass at round(mu) clamped into the support.
ProbVec discretized_normal(double mu, double sigma, const Support& support);

// Maximum likelihood normal (biased variance) of bin-valued samples.
ProbVec fit_gaussian(std::span<const int64_t> samples, const Support& support);

// How grid values become kernel widths: in bins, or as multiples of the
// fitting samples' standard deviation floored at one bin.
enum class BandwidthUnit { kBins, kSdMultiple };

struct KdeConfig {
  std::vector<double> bandwidth_grid = default_grid();
  int folds = 2;
  uint64_t seed = 0;
  BandwidthUnit unit = BandwidthUnit::kBins;

  static std::vector<double> default_grid();  // 0.05, 0.10, ..., 0.95
  void validate() const;
};

struct KdeFit {
  ProbVec pmf;
  double bandwidth;  // the chosen grid value
};

// Kernel width for grid value h and fitting samples: h, or h * max(1, sd)
// with sd the sample standard deviation (n - 1 divisor; zero for one sample).
double kde_kernel_width(double h, std::span<const int64_t> samples,
                        BandwidthUnit unit);

// Gaussian kernel sums at the support bins, truncated to the support and
// renormalized.
ProbVec kde_pmf(std::span<const int64_t> samples, const Support& support,
                double width);

KdeFit fit_kde(std::span<const int64_t> samples, const Support& support,
               const KdeConfig& cfg);

}  // namespace ordest

#endif  // ORDEST_BASELINES_H_
