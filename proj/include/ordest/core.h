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

// Foundational value types: integer supports, probability vectors,
// histograms, cumulative distribution vectors and ordered chains.
//
// Every type validates its invariants on construction and is immutable
// afterwards, so instances can be shared freely between threads.

#ifndef ORDEST_CORE_H_
#define ORDEST_CORE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordest/error.h"

namespace ordest {

inline constexpr double kProbTol = 1e-9;

// An integer interval {l, ..., u} of unit-width bins. At least two bins.
class Support {
 public:
  Support(int64_t l, int64_t u);

  int64_t l() const { return l_; }
  int64_t u() const { return u_; }
  size_t size() const { return static_cast<size_t>(u_ - l_ + 1); }

  bool contains(int64_t bin) const { return bin >= l_ && bin <= u_; }
  // Position of `bin` in [0, size()). Bin must be contained.
  size_t offset(int64_t bin) const { return static_cast<size_t>(bin - l_); }
  int64_t bin(size_t offset) const { return l_ + static_cast<int64_t>(offset); }

  friend bool operator==(const Support&, const Support&) = default;

 private:
  int64_t l_;
  int64_t u_;
};

// A probability vector over a support: entries in [0, 1], summing to 1.
class ProbVec {
 public:
  // Validates within kProbTol; throws kLengthMismatch or kInvalidArgument.
  ProbVec(Support support, std::vector<double> probs);

  const Support& support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& values() const { return probs_; }
  size_t size() const { return probs_.size(); }
  double operator[](size_t i) const { return probs_[i]; }
  double at_bin(int64_t bin) const { return probs_[support_.offset(bin)]; }

  // Index of the largest entry, ties to the smallest index.
  size_t argmax() const;

 private:
  Support support_;
  std::vector<double> probs_;
};

// Raw non-negative counts per bin.
class Histogram {
 public:
  Histogram(Support support, std::vector<int64_t> counts);

  // An all-zero histogram.
  explicit Histogram(Support support);

  const Support& support() const { return support_; }
  std::span<const int64_t> counts() const { return counts_; }
  int64_t total() const { return total_; }
  size_t size() const { return counts_.size(); }
  int64_t operator[](size_t i) const { return counts_[i]; }

  // Expands the histogram into one bin index per record, in bin order.
  std::vector<int64_t> samples() const;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  Support support_;
  std::vector<int64_t> counts_;
  int64_t total_ = 0;
};

// Histogram over `support` built from a list of bin indices.
Histogram histogram_from_samples(std::span<const int64_t> samples,
                                 const Support& support);

// Prefix sums of a probability vector.
class CumVec {
 public:
  CumVec(Support support, std::vector<double> cums);

  const Support& support() const { return support_; }
  std::span<const double> cums() const { return cums_; }
  size_t size() const { return cums_.size(); }
  double operator[](size_t i) const { return cums_[i]; }

 private:
  Support support_;
  std::vector<double> cums_;
};

// An ordered list of empirical distributions. Position 0 is the
// stochastically smallest one.
class ChainProblem {
 public:
  ChainProblem(Support support, std::vector<ProbVec> empiricals,
               std::vector<std::string> labels);

  const Support& support() const { return support_; }
  const std::vector<ProbVec>& empiricals() const { return empiricals_; }
  const std::vector<std::string>& labels() const { return labels_; }
  size_t k() const { return empiricals_.size(); }

 private:
  Support support_;
  std::vector<ProbVec> empiricals_;
  std::vector<std::string> labels_;
};

ProbVec normalize(std::span<const double> weights, const Support& support);

ProbVec empirical_from_histogram(const Histogram& h);

CumVec cdf(const ProbVec& p);

}  // namespace ordest

#endif  // ORDEST_CORE_H_
