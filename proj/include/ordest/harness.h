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


// Experiment orchestration: draws samples per (instance, n, trial), fits the
// five estimators, scores them by JSD against the truths and writes results,
// summaries, a method table and plot data.
//
// Every trial draws from streams keyed by hash(seed, instance, n, trial), so
// all methods see the same samples and the output does not depend on how
// trials are scheduled over workers.

#ifndef ORDEST_HARNESS_H_
#define ORDEST_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordest/baselines.h"
#include "ordest/core.h"
#include "ordest/ingest.h"
#include "ordest/miqp.h"
#include "ordest/synth.h"

namespace ordest {

// Declaration order is the canonical output order.
enum class Method { kEmp, kGaussian, kKernel, kUnimodal, kOurs };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
std::vector<Method> all_methods();

enum class ExperimentMode { kSynthetic, kSurrogate, kCsv };

std::string_view mode_name(ExperimentMode m);
std::optional<ExperimentMode> parse_mode(std::string_view name);

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kSynthetic;
  std::vector<Method> methods = all_methods();
  std::vector<int> n_grid;  // empty: the mode's default
  int trials = 0;           // 0: the mode's default
  uint64_t seed = 0;
  SolverOptions solver;
  KdeConfig kde;

  // synthetic and surrogate
  Support support{-50, 50};
  std::vector<NormalComponent> components{{-20.0, 50.0}, {20.0, 50.0}};
  // surrogate
  std::vector<int> chain_lengths{3, 6};
  double spacing = 10.0;
  double sigma2 = 50.0;
  // csv
  std::string input_path;
  std::vector<InstanceSpec> instances;

  std::string out_dir;
  int workers = 1;
  // Real fit times in results.csv; off by default so reruns are
  // byte-identical. timings.csv always carries them.
  bool record_wallclock = false;

  // Fills n_grid and trials from the mode defaults.
  ExperimentConfig resolved() const;
  // Throws kConfigError.
  void validate() const;
};

struct ResultRow {
  std::string instance;
  Method method;
  int n;
  int trial;
  std::string series;
  size_t series_pos;
  double jsd;  // NaN on error rows
  int64_t wallclock_ms;
  bool error = false;
  std::string error_message;
};

// One ordered chain with its truths and a way to draw n records per series.
struct TrialInstance {
  std::string name;
  std::vector<std::string> labels;
  std::vector<ProbVec> truths;
  // Exactly one sampling source: normal components (rounded draws) or
  // training histograms (subsampled without replacement). With neither,
  // records are drawn from the truth pmfs.
  std::vector<NormalComponent> components;
  std::vector<Histogram> train;
};

struct TrialOptions {
  SolverOptions solver;
  KdeConfig kde;
};

// Samples n records per series with streams derived from trial_key, fits
// every requested method and scores it. Method failures become error rows.
std::vector<ResultRow> run_trial(const TrialInstance& inst, int n, int trial,
                                 std::span<const Method> methods,
                                 uint64_t trial_key, const TrialOptions& opts);

// Convenience form that samples from the truth pmfs.
std::vector<ResultRow> run_trial(const std::vector<ProbVec>& truths, int n,
                                 std::span<const Method> methods,
                                 uint64_t seed,
                                 const TrialOptions& opts = {});

uint64_t trial_key(uint64_t seed, std::string_view instance, int n, int trial);

struct Interval {
  double mean;
  double lo;
  double hi;
};

// mean +- 1.96 s / sqrt(n), s with the n - 1 divisor. Needs two samples.
Interval confidence_interval(std::span<const double> samples);

struct SummaryRow {
  std::string instance;
  Method method;
  int n;
  double mean_jsd;
  std::optional<Interval> ci;  // absent with fewer than two trials
  int trials_ok;
  int trials_err;
};

// Per (instance, method, n). A trial counts as ok when all its series rows
// are; its score is the mean JSD over those series.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

struct TableRow {
  Method method;
  int n;
  double series_weighted;    // mean over all ok series rows
  double instance_weighted;  // mean over instances of instance means
};

std::vector<TableRow> method_table(const std::vector<ResultRow>& rows);

// Builds the trial instances for a resolved config. csv mode reads the input
// file and reports dropped instances.
struct PreparedExperiment {
  std::vector<TrialInstance> instances;
  std::vector<DroppedInstance> dropped;
};
PreparedExperiment prepare_experiment(const ExperimentConfig& cfg);

// Runs all trials over cfg.workers threads and returns rows in canonical
// order (instance, method, n, trial, series).
std::vector<ResultRow> run_rows(const ExperimentConfig& cfg,
                                const PreparedExperiment& prep);

std::string format_results_csv(const std::vector<ResultRow>& rows,
                               bool with_wallclock);
std::string format_summary_csv(const std::vector<SummaryRow>& rows);
std::string format_table_csv(const std::vector<TableRow>& rows);
std::string format_plot_csv(const std::vector<SummaryRow>& rows,
                            std::string_view instance);
std::string format_table_text(const std::vector<TableRow>& rows);

struct ExperimentReport {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<TableRow> table;
  std::vector<std::string> files;  // written paths
  std::string table_text;
};

// Writes results.csv, summary.csv, table.csv, timings.csv, errors.csv,
// plot_<instance>.csv, config.json and, in csv mode, dropped.csv into
// cfg.out_dir (created if needed).
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace ordest

#endif  // ORDEST_HARNESS_H_
