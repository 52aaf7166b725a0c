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


// Deterministic random streams. A stream is keyed by a 64-bit value and
// yields the SplitMix64 output sequence, so the i-th draw depends only on the
// key and i. Keys for sub-streams are derived by hashing a path of integers
// (seed, trial, series, ...) which keeps results independent of the order in
// which jobs run.

#ifndef ORDEST_RNG_H_
#define ORDEST_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace ordest {

uint64_t mix64(uint64_t z);

// Order-sensitive hash of a path of integers.
uint64_t derive_key(uint64_t seed, std::initializer_list<uint64_t> path);

uint64_t hash_string(std::string_view s);

class RngStream {
 public:
  using result_type = uint64_t;

  explicit RngStream(uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  uint64_t key() const { return key_; }
  uint64_t position() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace ordest

#endif  // ORDEST_RNG_H_
