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


#include "ordest/synth.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "ordest/baselines.h"
#include "ordest/error.h"

namespace ordest {

void SyntheticSpec::validate() const {
  if (components.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no components");
  }
  for (size_t j = 0; j < components.size(); ++j) {
    const NormalComponent& c = components[j];
    if (!std::isfinite(c.mu) || !(c.sigma2 > 0.0) || !std::isfinite(c.sigma2)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "component needs a finite mean and positive variance");
    }
    if (j > 0 && c.mu < components[j - 1].mu) {
      throw Error(ErrorCode::kInvalidArgument,
                  "component means must be non-decreasing");
    }
  }
  if (n < 1 || trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n and trials must be >= 1");
  }
}

ProbVec true_discretized_normal(double mu, double sigma2,
                                const Support& support) {
  if (!(sigma2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "variance must be positive");
  }
  return discretized_normal(mu, std::sqrt(sigma2), support);
}

std::vector<int64_t> sample_bins(double mu, double sigma2,
                                 const Support& support, int n,
                                 RngStream& stream) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (!(sigma2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "variance must be positive");
  }
  std::normal_distribution<double> nd(mu, std::sqrt(sigma2));
  const double lo = static_cast<double>(support.l());
  const double hi = static_cast<double>(support.u());
  std::vector<int64_t> out(static_cast<size_t>(n));
  for (int64_t& v : out) {
    v = static_cast<int64_t>(std::clamp(std::round(nd(stream)), lo, hi));
  }
  return out;
}

Histogram sample_histogram(double mu, double sigma2, const Support& support,
                           int n, RngStream& stream) {
  return histogram_from_samples(sample_bins(mu, sigma2, support, n, stream),
                                support);
}

std::vector<double> surrogate_means(int k, double spacing) {
  std::vector<double> mu(static_cast<size_t>(std::max(k, 0)));
  for (int j = 0; j < k; ++j) {
    mu[static_cast<size_t>(j)] = (j - (k - 1) / 2.0) * spacing;
  }
  return mu;
}

std::vector<ProbVec> make_surrogate_chain(int k, double spacing, double sigma2,
                                          const Support& support) {
  if (k < 2) {
    throw Error(ErrorCode::kChainTooShort, "a chain needs at least two series");
  }
  if (!(spacing >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must be non-negative");
  }
  std::vector<ProbVec> out;
  for (double mu : surrogate_means(k, spacing)) {
    out.push_back(true_discretized_normal(mu, sigma2, support));
  }
  return out;
}

}  // namespace ordest
