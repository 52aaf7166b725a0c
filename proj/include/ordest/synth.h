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


// Synthetic ground truths: discretized normals, samplers and a chain of
// equally spaced normals standing in for ordered query series.

#ifndef ORDEST_SYNTH_H_
#define ORDEST_SYNTH_H_

#include <cstdint>
#include <vector>

#include "ordest/core.h"
#include "ordest/rng.h"

namespace ordest {

struct NormalComponent {
  double mu;
  double sigma2;  // variance
};

struct SyntheticSpec {
  Support support{-50, 50};
  std::vector<NormalComponent> components;
  int n = 10;
  int trials = 100;
  uint64_t seed = 0;

  // Throws kInvalidArgument unless means are non-decreasing, variances
  // positive, n >= 1 and trials >= 1.
  void validate() const;
};

ProbVec true_discretized_normal(double mu, double sigma2,
                                const Support& support);

// n draws from N(mu, sigma2), rounded to the nearest bin and clamped into the
// support.
std::vector<int64_t> sample_bins(double mu, double sigma2,
                                 const Support& support, int n,
                                 RngStream& stream);

Histogram sample_histogram(double mu, double sigma2, const Support& support,
                           int n, RngStream& stream);

// Means of the surrogate chain: (j - (k - 1) / 2) * spacing.
std::vector<double> surrogate_means(int k, double spacing);

std::vector<ProbVec> make_surrogate_chain(int k, double spacing, double sigma2,
                                          const Support& support);

}  // namespace ordest

#endif  // ORDEST_SYNTH_H_
