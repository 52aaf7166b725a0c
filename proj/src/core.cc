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

#include "ordest/core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace ordest {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kInfiniteDivergence: return "InfiniteDivergence";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kChainTooShort: return "ChainTooShort";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingSeries: return "MissingSeries";
    case ErrorCode::kNotEnoughRecords: return "NotEnoughRecords";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Support::Support(int64_t l, int64_t u) : l_(l), u_(u) {
  if (l >= u) {
    throw Error(ErrorCode::kInvalidArgument,
                "support needs at least two bins, got {" + std::to_string(l) +
                    ".." + std::to_string(u) + "}");
  }
}

ProbVec::ProbVec(Support support, std::vector<double> probs)
    : support_(support), probs_(std::move(probs)) {
  if (probs_.size() != support_.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "probability vector has " + std::to_string(probs_.size()) +
                    " entries for a support of " +
                    std::to_string(support_.size()));
  }
  double sum = 0.0;
  for (double v : probs_) {
    if (!(v >= -kProbTol && v <= 1.0 + kProbTol)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "probability entry out of [0, 1]: " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw Error(ErrorCode::kInvalidArgument,
                "probabilities sum to " + std::to_string(sum));
  }
}

size_t ProbVec::argmax() const {
  return static_cast<size_t>(
      std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

Histogram::Histogram(Support support, std::vector<int64_t> counts)
    : support_(support), counts_(std::move(counts)) {
  if (counts_.size() != support_.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "histogram has " + std::to_string(counts_.size()) +
                    " bins for a support of " +
                    std::to_string(support_.size()));
  }
  for (int64_t c : counts_) {
    if (c < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative histogram count");
    }
    total_ += c;
  }
}

Histogram::Histogram(Support support)
    : support_(support), counts_(support.size(), 0) {}

std::vector<int64_t> Histogram::samples() const {
  std::vector<int64_t> out;
  out.reserve(static_cast<size_t>(total_));
  for (size_t i = 0; i < counts_.size(); ++i) {
    out.insert(out.end(), static_cast<size_t>(counts_[i]), support_.bin(i));
  }
  return out;
}

Histogram histogram_from_samples(std::span<const int64_t> samples,
                                 const Support& support) {
  std::vector<int64_t> counts(support.size(), 0);
  for (int64_t s : samples) {
    if (!support.contains(s)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample " + std::to_string(s) + " outside support");
    }
    ++counts[support.offset(s)];
  }
  return Histogram(support, std::move(counts));
}

CumVec::CumVec(Support support, std::vector<double> cums)
    : support_(support), cums_(std::move(cums)) {
  if (cums_.size() != support_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "cumulative vector length");
  }
  for (size_t i = 1; i < cums_.size(); ++i) {
    if (cums_[i] < cums_[i - 1] - kProbTol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cumulative vector decreases at offset " +
                      std::to_string(i));
    }
  }
  if (std::abs(cums_.back() - 1.0) > kProbTol) {
    throw Error(ErrorCode::kInvalidArgument,
                "cumulative vector ends at " + std::to_string(cums_.back()));
  }
}

ChainProblem::ChainProblem(Support support, std::vector<ProbVec> empiricals,
                           std::vector<std::string> labels)
    : support_(support),
      empiricals_(std::move(empiricals)),
      labels_(std::move(labels)) {
  if (empiricals_.empty()) {
    throw Error(ErrorCode::kChainTooShort, "chain needs at least one member");
  }
  if (empiricals_.size() != labels_.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "chain has " + std::to_string(empiricals_.size()) +
                    " distributions but " + std::to_string(labels_.size()) +
                    " labels");
  }
  for (const ProbVec& p : empiricals_) {
    if (!(p.support() == support_)) {
      throw Error(ErrorCode::kSupportMismatch,
                  "chain members must share the chain support");
    }
  }
}

ProbVec normalize(std::span<const double> weights, const Support& support) {
  if (weights.size() != support.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "weights have " + std::to_string(weights.size()) +
                    " entries for a support of " +
                    std::to_string(support.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weights must be finite and non-negative");
    }
    total += w;
  }
  if (total <= 0.0) throw Error(ErrorCode::kZeroMass, "all weights are zero");
  std::vector<double> probs(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) probs[i] = weights[i] / total;
  return ProbVec(support, std::move(probs));
}

ProbVec empirical_from_histogram(const Histogram& h) {
  if (h.total() <= 0) throw Error(ErrorCode::kZeroMass, "empty histogram");
  std::vector<double> probs(h.size());
  const double total = static_cast<double>(h.total());
  for (size_t i = 0; i < h.size(); ++i) {
    probs[i] = static_cast<double>(h[i]) / total;
  }
  return ProbVec(h.support(), std::move(probs));
}

CumVec cdf(const ProbVec& p) {
  std::vector<double> cums(p.size());
  std::partial_sum(p.probs().begin(), p.probs().end(), cums.begin());
  return CumVec(p.support(), std::move(cums));
}

}  // namespace ordest
