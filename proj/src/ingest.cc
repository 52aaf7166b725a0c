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


#include "ordest/ingest.h"

#include <charconv>
#include <map>
#include <random>
#include <set>

#include "ordest/error.h"

namespace ordest {
namespace {

constexpr std::string_view kHeader = "series,bin,count,split";

[[noreturn]] void parse_fail(size_t line, const std::string& why) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + why);
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool parse_int(std::string_view s, int64_t& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string_view split_name(Split s) {
  return s == Split::kTrain ? "train" : "test";
}

std::vector<RecordRow> parse_records_csv(std::string_view text) {
  std::vector<RecordRow> rows;
  size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    const std::string_view line =
        chomp(nl == std::string_view::npos ? text : text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!header_seen) {
      if (line != kHeader) {
        parse_fail(line_no, "expected header '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    size_t start = 0;
    for (;;) {
      const size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      parse_fail(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    RecordRow row;
    if (!valid_identifier(fields[0])) {
      parse_fail(line_no, "series must match [A-Za-z0-9_]+");
    }
    row.series = std::string(fields[0]);
    if (!parse_int(fields[1], row.bin)) parse_fail(line_no, "bin is not an integer");
    if (!parse_int(fields[2], row.count)) {
      parse_fail(line_no, "count is not an integer");
    }
    if (row.count < 0) parse_fail(line_no, "negative count");
    if (fields[3] == "train") {
      row.split = Split::kTrain;
    } else if (fields[3] == "test") {
      row.split = Split::kTest;
    } else {
      parse_fail(line_no, "unknown split '" + std::string(fields[3]) + "'");
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) parse_fail(1, "missing header");
  return rows;
}

std::string format_records_csv(const std::vector<RecordRow>& rows) {
  std::string out(kHeader);
  out += '\n';
  for (const RecordRow& r : rows) {
    out += r.series;
    out += ',';
    out += std::to_string(r.bin);
    out += ',';
    out += std::to_string(r.count);
    out += ',';
    out += split_name(r.split);
    out += '\n';
  }
  return out;
}

std::vector<RecordRow> histogram_rows(const std::string& series,
                                      const Histogram& h, Split split) {
  std::vector<RecordRow> rows;
  for (size_t i = 0; i < h.size(); ++i) {
    if (h[i] > 0) rows.push_back({series, h.support().bin(i), h[i], split});
  }
  return rows;
}

void InstanceSpec::validate() const {
  if (series_chain.size() < 2) {
    throw Error(ErrorCode::kChainTooShort,
                "instance '" + name + "' needs at least two series");
  }
  if (min_records < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance '" + name + "': min_records must be >= 1");
  }
}

InstanceSet build_instances(const std::vector<RecordRow>& rows,
                            const std::vector<InstanceSpec>& specs) {
  // series -> split -> bin -> count; ordered maps make the result
  // independent of row order.
  std::map<std::string, std::map<Split, std::map<int64_t, int64_t>>> agg;
  for (const RecordRow& r : rows) agg[r.series][r.split][r.bin] += r.count;

  InstanceSet out;
  for (const InstanceSpec& spec : specs) {
    spec.validate();
    for (const std::string& s : spec.series_chain) {
      if (!agg.count(s)) {
        throw Error(ErrorCode::kMissingSeries,
                    "instance '" + spec.name + "' references unknown series '" +
                        s + "'");
      }
    }
    Instance inst{spec, {}, {}};
    std::string reason;
    for (const std::string& s : spec.series_chain) {
      std::vector<int64_t> counts[2];
      int64_t outside = 0;
      for (Split split : {Split::kTrain, Split::kTest}) {
        auto& c = counts[split == Split::kTrain ? 0 : 1];
        c.assign(spec.support.size(), 0);
        const auto it = agg[s].find(split);
        if (it == agg[s].end()) continue;
        for (const auto& [bin, count] : it->second) {
          if (spec.support.contains(bin)) {
            c[spec.support.offset(bin)] += count;
          } else {
            outside += count;
          }
        }
      }
      if (outside > 0) out.out_of_support.push_back({spec.name, s, outside});
      Histogram train(spec.support, std::move(counts[0]));
      Histogram test(spec.support, std::move(counts[1]));
      if (reason.empty()) {
        if (train.total() < spec.min_records) {
          reason = "series " + s + " has " + std::to_string(train.total()) +
                   " train records (min_records " +
                   std::to_string(spec.min_records) + ")";
        } else if (test.total() < spec.min_records) {
          reason = "series " + s + " has " + std::to_string(test.total()) +
                   " test records (min_records " +
                   std::to_string(spec.min_records) + ")";
        }
      }
      if (!reason.empty()) continue;
      inst.train.push_back(std::move(train));
      inst.test.push_back(empirical_from_histogram(test));
    }
    if (reason.empty()) {
      out.instances.push_back(std::move(inst));
    } else {
      out.dropped.push_back({spec.name, reason});
    }
  }
  return out;
}

std::string format_dropped_csv(const std::vector<DroppedInstance>& dropped) {
  std::string out = "instance,reason\n";
  for (const DroppedInstance& d : dropped) {
    out += d.instance;
    out += ',';
    out += d.reason;
    out += '\n';
  }
  return out;
}

Histogram subsample(const Histogram& h, int64_t n, RngStream& stream) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (n > h.total()) {
    throw Error(ErrorCode::kNotEnoughRecords,
                "requested " + std::to_string(n) + " of " +
                    std::to_string(h.total()) + " records");
  }
  // Selection sampling over the records in bin order.
  std::vector<int64_t> picked(h.size(), 0);
  int64_t need = n;
  int64_t left = h.total();
  for (size_t i = 0; i < h.size() && need > 0; ++i) {
    for (int64_t r = 0; r < h[i] && need > 0; ++r, --left) {
      std::uniform_int_distribution<int64_t> pick(0, left - 1);
      if (pick(stream) < need) {
        ++picked[i];
        --need;
      }
    }
  }
  return Histogram(h.support(), std::move(picked));
}

}  // namespace ordest
