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


#include "ordest/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

#include "ordest/config.h"
#include "ordest/error.h"
#include "ordest/metrics.h"
#include "ordest/pava.h"
#include "ordest/rng.h"

namespace ordest {
namespace {

constexpr uint64_t kSampleTag = 1;
constexpr uint64_t kKdeTag = 2;

[[noreturn]] void config_fail(const std::string& why) {
  throw Error(ErrorCode::kConfigError, why);
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<int64_t> draw_records(const TrialInstance& inst, size_t j, int n,
                                  uint64_t key) {
  RngStream stream(derive_key(key, {kSampleTag, j}));
  const Support& s = inst.truths[j].support();
  if (!inst.components.empty()) {
    const NormalComponent& c = inst.components[j];
    return sample_bins(c.mu, c.sigma2, s, n, stream);
  }
  if (!inst.train.empty()) {
    return subsample(inst.train[j], n, stream).samples();
  }
  const auto probs = inst.truths[j].probs();
  std::discrete_distribution<size_t> pick(probs.begin(), probs.end());
  std::vector<int64_t> out(static_cast<size_t>(n));
  for (int64_t& v : out) v = s.bin(pick(stream));
  std::sort(out.begin(), out.end());
  return out;
}

int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kEmp:
      return "EMP";
    case Method::kGaussian:
      return "GAUSSIAN";
    case Method::kKernel:
      return "KERNEL";
    case Method::kUnimodal:
      return "UNIMODAL";
    case Method::kOurs:
      return "OURS";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<Method> all_methods() {
  return {Method::kEmp, Method::kGaussian, Method::kKernel, Method::kUnimodal,
          Method::kOurs};
}

std::string_view mode_name(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::kSynthetic:
      return "synthetic";
    case ExperimentMode::kSurrogate:
      return "surrogate";
    case ExperimentMode::kCsv:
      return "csv";
  }
  return "?";
}

std::optional<ExperimentMode> parse_mode(std::string_view name) {
  for (ExperimentMode m : {ExperimentMode::kSynthetic,
                           ExperimentMode::kSurrogate, ExperimentMode::kCsv}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  if (c.n_grid.empty()) {
    const int top = mode == ExperimentMode::kSynthetic ? 100 : 80;
    for (int n = 10; n <= top; n += 10) c.n_grid.push_back(n);
  }
  if (c.trials == 0) {
    c.trials = mode == ExperimentMode::kSynthetic   ? 100
               : mode == ExperimentMode::kSurrogate ? 50
                                                    : 10;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) config_fail("no methods selected");
  std::set<Method> seen(methods.begin(), methods.end());
  if (seen.size() != methods.size()) config_fail("duplicate method");
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      config_fail("n_grid must be strictly increasing and >= 1");
    }
  }
  if (trials < 0) config_fail("trials must be >= 1");
  if (workers < 1) config_fail("workers must be >= 1");
  if (!(solver.time_limit_s > 0.0) || !(solver.gap_tol >= 0.0) ||
      solver.node_limit < 1) {
    config_fail("invalid solver options");
  }
  try {
    kde.validate();
  } catch (const Error& e) {
    config_fail(std::string("kde: ") + e.what());
  }
  switch (mode) {
    case ExperimentMode::kSynthetic: {
      SyntheticSpec spec{support, components, 1, 1, seed};
      try {
        spec.validate();
      } catch (const Error& e) {
        config_fail(std::string("components: ") + e.what());
      }
      break;
    }
    case ExperimentMode::kSurrogate:
      if (chain_lengths.empty()) config_fail("no chain lengths");
      for (int k : chain_lengths) {
        if (k < 2) config_fail("chain lengths must be >= 2");
      }
      if (!(spacing >= 0.0) || !std::isfinite(spacing)) {
        config_fail("spacing must be finite and >= 0");
      }
      if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        config_fail("sigma2 must be positive");
      }
      break;
    case ExperimentMode::kCsv:
      if (input_path.empty()) config_fail("csv mode needs input_path");
      if (instances.empty()) config_fail("csv mode needs instances");
      for (const InstanceSpec& s : instances) {
        try {
          s.validate();
        } catch (const Error& e) {
          config_fail(e.what());
        }
      }
      break;
  }
}

uint64_t trial_key(uint64_t seed, std::string_view instance, int n,
                   int trial) {
  return derive_key(seed, {hash_string(instance), static_cast<uint64_t>(n),
                           static_cast<uint64_t>(trial)});
}

std::vector<ResultRow> run_trial(const TrialInstance& inst, int n, int trial,
                                 std::span<const Method> methods,
                                 uint64_t key, const TrialOptions& opts) {
  const size_t k = inst.truths.size();
  std::vector<ResultRow> rows;
  auto emit = [&](Method m, size_t j, double value, int64_t ms,
                  const std::string& err) {
    ResultRow r{inst.name, m,     n,     trial, inst.labels[j],
                j,         value, ms,    !err.empty(), err};
    if (r.error) r.jsd = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(r));
  };

  std::vector<std::vector<int64_t>> samples(k);
  std::vector<ProbVec> emp;
  std::string sample_error;
  try {
    for (size_t j = 0; j < k; ++j) {
      samples[j] = draw_records(inst, j, n, key);
      emp.push_back(empirical_from_histogram(
          histogram_from_samples(samples[j], inst.truths[j].support())));
    }
  } catch (const std::exception& e) {
    sample_error = e.what();
  }

  for (Method m : methods) {
    if (!sample_error.empty()) {
      for (size_t j = 0; j < k; ++j) emit(m, j, 0.0, 0, sample_error);
      continue;
    }
    if (m == Method::kOurs) {
      const auto start = std::chrono::steady_clock::now();
      try {
        const Support& s = inst.truths[0].support();
        const MiqpModel model =
            k == 1 ? build_single(emp[0])
                   : build_chain(ChainProblem(s, emp, inst.labels));
        const MiqpSolution sol = solve_bnb(model, opts.solver);
        const int64_t ms = elapsed_ms(start);
        for (size_t j = 0; j < k; ++j) {
          emit(m, j, jsd(sol.fits[j], inst.truths[j]), ms, "");
        }
      } catch (const std::exception& e) {
        for (size_t j = 0; j < k; ++j) emit(m, j, 0.0, elapsed_ms(start), e.what());
      }
      continue;
    }
    for (size_t j = 0; j < k; ++j) {
      const Support& s = inst.truths[j].support();
      const auto start = std::chrono::steady_clock::now();
      try {
        std::optional<ProbVec> fit;
        switch (m) {
          case Method::kEmp:
            fit = emp[j];
            break;
          case Method::kGaussian:
            fit = fit_gaussian(samples[j], s);
            break;
          case Method::kKernel: {
            KdeConfig kc = opts.kde;
            kc.seed = derive_key(key, {kKdeTag, j, opts.kde.seed});
            fit = fit_kde(samples[j], s, kc).pmf;
            break;
          }
          case Method::kUnimodal:
            fit = unimodal_regression_exact(emp[j]).fitted;
            break;
          case Method::kOurs:
            break;
        }
        emit(m, j, jsd(*fit, inst.truths[j]), elapsed_ms(start), "");
      } catch (const std::exception& e) {
        emit(m, j, 0.0, elapsed_ms(start), e.what());
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_trial(const std::vector<ProbVec>& truths, int n,
                                 std::span<const Method> methods,
                                 uint64_t seed, const TrialOptions& opts) {
  TrialInstance inst;
  inst.name = "trial";
  inst.truths = truths;
  for (size_t j = 0; j < truths.size(); ++j) {
    inst.labels.push_back("s" + std::to_string(j));
  }
  return run_trial(inst, n, 0, methods, trial_key(seed, inst.name, n, 0), opts);
}

Interval confidence_interval(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::kTooFewSamples,
                "a confidence interval needs at least two samples");
  }
  const double m = mean_of(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  const double n = static_cast<double>(samples.size());
  const double half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return {m, m - half, m + half};
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  struct Key {
    std::string instance;
    Method method;
    int n;
    bool operator==(const Key&) const = default;
  };
  std::vector<SummaryRow> out;
  size_t i = 0;
  while (i < rows.size()) {
    const Key key{rows[i].instance, rows[i].method, rows[i].n};
    // trial -> (all rows ok, jsd values)
    std::map<int, std::pair<bool, std::vector<double>>> trials;
    for (; i < rows.size() &&
           Key{rows[i].instance, rows[i].method, rows[i].n} == key;
         ++i) {
      auto& t = trials.try_emplace(rows[i].trial, true, std::vector<double>{})
                    .first->second;
      if (rows[i].error) {
        t.first = false;
      } else {
        t.second.push_back(rows[i].jsd);
      }
    }
    SummaryRow s{key.instance, key.method, key.n, 0.0, std::nullopt, 0, 0};
    std::vector<double> scores;
    for (const auto& entry : trials) {
      const auto& [ok, values] = entry.second;
      if (ok) {
        scores.push_back(mean_of(values));
        ++s.trials_ok;
      } else {
        ++s.trials_err;
      }
    }
    s.mean_jsd = scores.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : mean_of(scores);
    if (scores.size() >= 2) s.ci = confidence_interval(scores);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TableRow> method_table(const std::vector<ResultRow>& rows) {
  // (method, n) -> instance -> (sum, count)
  std::map<std::pair<Method, int>, std::map<std::string, std::pair<double, int>>>
      acc;
  for (const ResultRow& r : rows) {
    if (r.error) continue;
    auto& cell = acc[{r.method, r.n}][r.instance];
    cell.first += r.jsd;
    cell.second += 1;
  }
  std::vector<TableRow> out;
  for (const auto& [key, per_inst] : acc) {
    double sum = 0.0, inst_sum = 0.0;
    int count = 0;
    for (const auto& [name, cell] : per_inst) {
      sum += cell.first;
      count += cell.second;
      inst_sum += cell.first / cell.second;
    }
    out.push_back({key.first, key.second, sum / count,
                   inst_sum / static_cast<double>(per_inst.size())});
  }
  std::stable_sort(out.begin(), out.end(), [](const TableRow& a, const TableRow& b) {
    return a.n < b.n;
  });
  return out;
}

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
  PreparedExperiment prep;
  switch (cfg.mode) {
    case ExperimentMode::kSynthetic: {
      TrialInstance inst;
      inst.name = "synthetic";
      inst.components = cfg.components;
      for (size_t j = 0; j < cfg.components.size(); ++j) {
        inst.labels.push_back("s" + std::to_string(j));
        inst.truths.push_back(true_discretized_normal(
            cfg.components[j].mu, cfg.components[j].sigma2, cfg.support));
      }
      prep.instances.push_back(std::move(inst));
      break;
    }
    case ExperimentMode::kSurrogate:
      for (int k : cfg.chain_lengths) {
        TrialInstance inst;
        inst.name = "surrogate_k" + std::to_string(k);
        inst.truths = make_surrogate_chain(k, cfg.spacing, cfg.sigma2, cfg.support);
        const std::vector<double> mu = surrogate_means(k, cfg.spacing);
        for (int j = 0; j < k; ++j) {
          inst.labels.push_back("s" + std::to_string(j));
          inst.components.push_back({mu[static_cast<size_t>(j)], cfg.sigma2});
        }
        prep.instances.push_back(std::move(inst));
      }
      break;
    case ExperimentMode::kCsv: {
      const std::vector<RecordRow> rows =
          parse_records_csv(read_text_file(cfg.input_path));
      InstanceSet set = build_instances(rows, cfg.instances);
      for (Instance& in : set.instances) {
        TrialInstance inst;
        inst.name = in.spec.name;
        inst.labels = in.spec.series_chain;
        inst.truths = std::move(in.test);
        inst.train = std::move(in.train);
        prep.instances.push_back(std::move(inst));
      }
      prep.dropped = std::move(set.dropped);
      break;
    }
  }
  return prep;
}

std::vector<ResultRow> run_rows(const ExperimentConfig& cfg_in,
                                const PreparedExperiment& prep) {
  const ExperimentConfig cfg = cfg_in.resolved();
  cfg.validate();
  struct Job {
    size_t inst;
    int n;
    int trial;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < prep.instances.size(); ++i) {
    for (int n : cfg.n_grid) {
      for (int t = 0; t < cfg.trials; ++t) jobs.push_back({i, n, t});
    }
  }
  const TrialOptions opts{cfg.solver, cfg.kde};
  std::vector<std::vector<ResultRow>> results(jobs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const Job& job = jobs[idx];
      const TrialInstance& inst = prep.instances[job.inst];
      try {
        results[idx] = run_trial(inst, job.n, job.trial, cfg.methods,
                                 trial_key(cfg.seed, inst.name, job.n, job.trial),
                                 opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const size_t nthreads =
      std::min<size_t>(static_cast<size_t>(cfg.workers), std::max<size_t>(jobs.size(), 1));
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < nthreads; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::unordered_map<std::string, size_t> inst_index;
  for (size_t i = 0; i < prep.instances.size(); ++i) {
    inst_index.emplace(prep.instances[i].name, i);
  }
  std::vector<ResultRow> rows;
  for (auto& r : results) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ResultRow& a, const ResultRow& b) {
                     const size_t ia = inst_index.at(a.instance);
                     const size_t ib = inst_index.at(b.instance);
                     if (ia != ib) return ia < ib;
                     if (a.method != b.method) return a.method < b.method;
                     if (a.n != b.n) return a.n < b.n;
                     if (a.trial != b.trial) return a.trial < b.trial;
                     return a.series_pos < b.series_pos;
                   });
  return rows;
}

std::string format_results_csv(const std::vector<ResultRow>& rows,
                               bool with_wallclock) {
  std::string out = "instance,method,n,trial,series,jsd,wallclock_ms\n";
  for (const ResultRow& r : rows) {
    out += r.instance + ',' + std::string(method_name(r.method)) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.trial) + ',' +
           r.series + ',' + (r.error ? std::string("ERR") : fmt(r.jsd)) + ',' +
           std::to_string(with_wallclock ? r.wallclock_ms : 0) + '\n';
  }
  return out;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "instance,method,n,mean_jsd,ci_lo,ci_hi,trials_ok,trials_err\n";
  for (const SummaryRow& s : rows) {
    out += s.instance + ',' + std::string(method_name(s.method)) + ',' +
           std::to_string(s.n) + ',' +
           (s.trials_ok > 0 ? fmt(s.mean_jsd) : std::string("NA")) + ',' +
           (s.ci ? fmt(s.ci->lo) : std::string("NA")) + ',' +
           (s.ci ? fmt(s.ci->hi) : std::string("NA")) + ',' +
           std::to_string(s.trials_ok) + ',' + std::to_string(s.trials_err) +
           '\n';
  }
  return out;
}

std::string format_table_csv(const std::vector<TableRow>& rows) {
  std::string out = "n,method,mean_jsd_per_series,mean_jsd_per_instance\n";
  for (const TableRow& t : rows) {
    out += std::to_string(t.n) + ',' + std::string(method_name(t.method)) +
           ',' + fmt(t.series_weighted) + ',' + fmt(t.instance_weighted) + '\n';
  }
  return out;
}

std::string format_plot_csv(const std::vector<SummaryRow>& rows,
                            std::string_view instance) {
  std::string out = "x,method,mean,lo,hi\n";
  for (const SummaryRow& s : rows) {
    if (s.instance != instance) continue;
    out += std::to_string(s.n) + ',' + std::string(method_name(s.method)) +
           ',' + (s.trials_ok > 0 ? fmt(s.mean_jsd) : std::string("NA")) +
           ',' + (s.ci ? fmt(s.ci->lo) : std::string("NA")) + ',' +
           (s.ci ? fmt(s.ci->hi) : std::string("NA")) + '\n';
  }
  return out;
}

std::string format_table_text(const std::vector<TableRow>& rows) {
  std::vector<Method> methods;
  std::vector<int> ns;
  std::map<std::pair<int, Method>, const TableRow*> cell;
  for (const TableRow& t : rows) {
    if (std::find(methods.begin(), methods.end(), t.method) == methods.end()) {
      methods.push_back(t.method);
    }
    if (std::find(ns.begin(), ns.end(), t.n) == ns.end()) ns.push_back(t.n);
    cell[{t.n, t.method}] = &t;
  }
  std::sort(methods.begin(), methods.end());
  std::string out;
  for (int pass = 0; pass < 2; ++pass) {
    out += pass == 0 ? "mean JSD, series weighted\n"
                     : "mean JSD, instance weighted\n";
    char line[256];
    std::snprintf(line, sizeof line, "%6s", "n");
    out += line;
    for (Method m : methods) {
      std::snprintf(line, sizeof line, " %10s", std::string(method_name(m)).c_str());
      out += line;
    }
    out += '\n';
    for (int n : ns) {
      std::snprintf(line, sizeof line, "%6d", n);
      out += line;
      for (Method m : methods) {
        const auto it = cell.find({n, m});
        if (it == cell.end()) {
          std::snprintf(line, sizeof line, " %10s", "NA");
        } else {
          std::snprintf(line, sizeof line, " %10.4f",
                        pass == 0 ? it->second->series_weighted
                                  : it->second->instance_weighted);
        }
        out += line;
      }
      out += '\n';
    }
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg_in) {
  const ExperimentConfig cfg = cfg_in.resolved();
  cfg.validate();
  if (cfg.out_dir.empty()) config_fail("out_dir is required");
  const PreparedExperiment prep = prepare_experiment(cfg);

  ExperimentReport rep;
  rep.rows = run_rows(cfg, prep);
  rep.summary = summarize(rep.rows);
  rep.table = method_table(rep.rows);
  rep.table_text = format_table_text(rep.table);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create " + cfg.out_dir + ": " + ec.message());
  }
  auto write = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
    rep.files.push_back(path);
  };

  write("results.csv", format_results_csv(rep.rows, cfg.record_wallclock));
  write("summary.csv", format_summary_csv(rep.summary));
  write("table.csv", format_table_csv(rep.table));
  std::string timings = "instance,method,n,trial,series,wallclock_ms\n";
  std::string errors = "instance,method,n,trial,series,error\n";
  for (const ResultRow& r : rep.rows) {
    const std::string head = r.instance + ',' + std::string(method_name(r.method)) +
                             ',' + std::to_string(r.n) + ',' +
                             std::to_string(r.trial) + ',' + r.series + ',';
    timings += head + std::to_string(r.wallclock_ms) + '\n';
    if (r.error) errors += head + csv_safe(r.error_message) + '\n';
  }
  write("timings.csv", timings);
  write("errors.csv", errors);
  for (const TrialInstance& inst : prep.instances) {
    write("plot_" + inst.name + ".csv", format_plot_csv(rep.summary, inst.name));
  }
  if (cfg.mode == ExperimentMode::kCsv) {
    write("dropped.csv", format_dropped_csv(prep.dropped));
  }
  write("config.json", experiment_config_to_json(cfg));
  return rep;
}

}  // namespace ordest
