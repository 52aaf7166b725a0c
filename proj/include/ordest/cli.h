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


// Command-line front end: estimate, synth, bench and oracle-check.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure.

#ifndef ORDEST_CLI_H_
#define ORDEST_CLI_H_

#include <cstdint>
#include <iosfwd>

#include "ordest/error.h"

namespace ordest {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

int exit_code_for(ErrorCode code);

struct OracleReport {
  int cases = 0;
  double max_brute_force_gap = 0.0;  // solve_bnb vs mode enumeration
  double max_pava_gap = 0.0;         // solve_bnb (k = 1) vs exact PAVA
};

// Random instances: chains with k in {1, 2, 3} and 4..10 bins against
// brute force, and single vectors with up to 200 bins against PAVA.
OracleReport run_oracle_check(uint64_t seed, int cases);

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace ordest

#endif  // ORDEST_CLI_H_
