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


// Record histograms from CSV (series,bin,count,split), grouped into ordered
// chains of series, plus subsampling of records without replacement.

#ifndef ORDEST_INGEST_H_
#define ORDEST_INGEST_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ordest/core.h"
#include "ordest/rng.h"

namespace ordest {

enum class Split { kTrain, kTest };

std::string_view split_name(Split s);

struct RecordRow {
  std::string series;
  int64_t bin;
  int64_t count;
  Split split;

  friend bool operator==(const RecordRow&, const RecordRow&) = default;
};

// Expects the header `series,bin,count,split`. Errors are kParseError with
// the 1-based line number in the message.
std::vector<RecordRow> parse_records_csv(std::string_view text);

std::string format_records_csv(const std::vector<RecordRow>& rows);

// Rows for the non-zero bins of a histogram.
std::vector<RecordRow> histogram_rows(const std::string& series,
                                      const Histogram& h, Split split);

struct InstanceSpec {
  std::string name;
  std::vector<std::string> series_chain;  // position = order position
  Support support;
  int64_t min_records = 80;

  void validate() const;
};

struct Instance {
  InstanceSpec spec;
  std::vector<Histogram> train;
  std::vector<ProbVec> test;
};

struct DroppedInstance {
  std::string instance;
  std::string reason;
};

struct OutOfSupport {
  std::string instance;
  std::string series;
  int64_t records;
};

struct InstanceSet {
  std::vector<Instance> instances;
  std::vector<DroppedInstance> dropped;
  std::vector<OutOfSupport> out_of_support;
};

// Throws kMissingSeries when a spec names a series with no rows at all.
InstanceSet build_instances(const std::vector<RecordRow>& rows,
                            const std::vector<InstanceSpec>& specs);

// `instance,reason` lines with a header.
std::string format_dropped_csv(const std::vector<DroppedInstance>& dropped);

// n records drawn without replacement. Throws kNotEnoughRecords when
// n > h.total() and kInvalidArgument when n < 1.
Histogram subsample(const Histogram& h, int64_t n, RngStream& stream);

}  // namespace ordest

#endif  // ORDEST_INGEST_H_
