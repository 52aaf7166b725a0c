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


// JSON documents for experiment configs and instance lists. Field names
// follow ExperimentConfig; unknown keys are rejected.

#ifndef ORDEST_CONFIG_H_
#define ORDEST_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "ordest/harness.h"
#include "ordest/ingest.h"

namespace ordest {

// Throws kConfigError on malformed JSON, unknown keys or wrong types.
ExperimentConfig parse_experiment_config(std::string_view json_text);

// A JSON array of {"name", "series", "support": [l, u], "min_records"}.
std::vector<InstanceSpec> parse_instance_specs(std::string_view json_text);

std::string experiment_config_to_json(const ExperimentConfig& cfg);

// Reads a whole file; throws kIoError.
std::string read_text_file(const std::string& path);

}  // namespace ordest

#endif  // ORDEST_CONFIG_H_
