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


#include "ordest/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "ordest/baselines.h"
#include "ordest/config.h"
#include "ordest/harness.h"
#include "ordest/ingest.h"
#include "ordest/miqp.h"
#include "ordest/pava.h"
#include "ordest/rng.h"

#ifndef ORDEST_VERSION
#define ORDEST_VERSION "dev"
#endif

namespace ordest {
namespace {

// Random pmf from normalized exponential draws.
ProbVec random_pmf(const Support& s, RngStream& stream) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(s.size());
  for (double& v : w) v = ex(stream);
  return normalize(w, s);
}

std::vector<ProbVec> fit_method(Method m, const Instance& inst, uint64_t seed,
                                const SolverOptions& solver) {
  const size_t k = inst.train.size();
  const Support& s = inst.spec.support;
  std::vector<ProbVec> emp;
  for (const Histogram& h : inst.train) emp.push_back(empirical_from_histogram(h));
  std::vector<ProbVec> out;
  switch (m) {
    case Method::kEmp:
      return emp;
    case Method::kGaussian:
      for (const Histogram& h : inst.train) out.push_back(fit_gaussian(h.samples(), s));
      return out;
    case Method::kKernel:
      for (size_t j = 0; j < k; ++j) {
        KdeConfig kc;
        kc.seed = derive_key(seed, {hash_string(inst.spec.name), j});
        out.push_back(fit_kde(inst.train[j].samples(), s, kc).pmf);
      }
      return out;
    case Method::kUnimodal:
      for (const ProbVec& p : emp) out.push_back(unimodal_regression_exact(p).fitted);
      return out;
    case Method::kOurs: {
      const MiqpSolution sol = solve_bnb(
          build_chain(ChainProblem(s, emp, inst.spec.series_chain)), solver);
      return sol.fits;
    }
  }
  return out;
}

void add_solver_flags(CLI::App* cmd, SolverOptions& solver) {
  cmd->add_option("--time-limit", solver.time_limit_s,
                  "solver time limit per chain, seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--node-limit", solver.node_limit,
                  "solver node limit per chain")
      ->check(CLI::PositiveNumber);
}

struct RunFlags {
  std::string config;
  std::string out_dir;
  uint64_t seed = 0;
  int trials = 0;
  int workers = 0;
  SolverOptions solver;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool config_required) {
  auto* c = cmd->add_option("--config", f.config, "JSON experiment config")
                ->check(CLI::ExistingFile);
  if (config_required) c->required();
  cmd->add_option("--out-dir", f.out_dir, "output directory")->required();
  cmd->add_option("--seed", f.seed, "overrides the config seed");
  cmd->add_option("--trials", f.trials, "overrides the config trial count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", f.workers,
                  "worker threads (default: number of processors)")
      ->check(CLI::PositiveNumber);
  add_solver_flags(cmd, f.solver);
}

ExperimentConfig config_for(const CLI::App* cmd, const RunFlags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) cfg = parse_experiment_config(read_text_file(f.config));
  cfg.out_dir = f.out_dir;
  if (cmd->count("--seed")) cfg.seed = f.seed;
  if (cmd->count("--trials")) cfg.trials = f.trials;
  if (cmd->count("--time-limit")) cfg.solver.time_limit_s = f.solver.time_limit_s;
  if (cmd->count("--node-limit")) cfg.solver.node_limit = f.solver.node_limit;
  if (cmd->count("--workers")) {
    cfg.workers = f.workers;
  } else {
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return cfg;
}

void print_report(const ExperimentReport& rep, std::ostream& out) {
  out << rep.table_text;
  size_t errors = 0;
  for (const ResultRow& r : rep.rows) errors += r.error ? 1 : 0;
  out << rep.rows.size() << " result rows, " << errors << " errors\n";
  for (const std::string& f : rep.files) out << "wrote " << f << '\n';
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kTooLarge:
      return kExitSolver;
    default:
      return kExitData;
  }
}

OracleReport run_oracle_check(uint64_t seed, int cases) {
  OracleReport rep;
  for (int c = 0; c < cases; ++c) {
    RngStream stream(derive_key(seed, {static_cast<uint64_t>(c)}));
    const int k = 1 + static_cast<int>(stream() % 3);
    const int bins = 4 + static_cast<int>(stream() % 7);
    const Support s(0, bins - 1);
    std::vector<ProbVec> ps;
    for (int j = 0; j < k; ++j) ps.push_back(random_pmf(s, stream));
    std::vector<std::string> labels;
    for (int j = 0; j < k; ++j) labels.push_back("s" + std::to_string(j));
    const MiqpModel model =
        k == 1 ? build_single(ps[0]) : build_chain(ChainProblem(s, ps, labels));
    const double bnb = solve_bnb(model).objective;
    const double brute = brute_force_modes(model).objective;
    rep.max_brute_force_gap = std::max(rep.max_brute_force_gap, std::abs(bnb - brute));

    const int big = 2 + static_cast<int>(stream() % 199);
    const Support sb(0, big - 1);
    const ProbVec p = random_pmf(sb, stream);
    const double single = solve_bnb(build_single(p)).objective;
    const double pava = unimodal_regression_exact(p).sse;
    rep.max_pava_gap = std::max(rep.max_pava_gap, std::abs(single - pava));
    ++rep.cases;
  }
  return rep;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Order-constrained unimodal estimation of discrete distributions"};
  app.name("ordest");
  app.set_version_flag("--version", std::string("ordest ") + ORDEST_VERSION);
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand(
      "estimate", "fit one method to every instance of a record CSV");
  std::string input, instances_path, method_str, out_path;
  uint64_t est_seed = 0;
  SolverOptions est_solver;
  est->add_option("--input", input, "record CSV (series,bin,count,split)")
      ->required()
      ->check(CLI::ExistingFile);
  est->add_option("--instances", instances_path, "JSON list of instances")
      ->required()
      ->check(CLI::ExistingFile);
  est->add_option("--method", method_str,
                  "EMP, GAUSSIAN, KERNEL, UNIMODAL or OURS")
      ->required()
      ->check(CLI::IsMember({"EMP", "GAUSSIAN", "KERNEL", "UNIMODAL", "OURS"}));
  est->add_option("--out", out_path, "output CSV (instance,series,bin,prob)")
      ->required();
  est->add_option("--seed", est_seed, "seed for the KERNEL cross-validation split");
  add_solver_flags(est, est_solver);

  // synth
  auto* syn = app.add_subcommand("synth", "two-normal synthetic experiment");
  RunFlags syn_flags;
  add_run_flags(syn, syn_flags, false);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "surrogate-chain or record-CSV experiment");
  RunFlags bench_flags;
  add_run_flags(bench, bench_flags, true);

  // oracle-check
  auto* oracle = app.add_subcommand(
      "oracle-check", "compare the solver against enumeration and PAVA");
  uint64_t oracle_seed = 0;
  int oracle_cases = 50;
  oracle->add_option("--seed", oracle_seed, "seed for the random cases");
  oracle->add_option("--cases", oracle_cases, "number of random cases")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    err << "error: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  try {
    if (*est) {
      const std::vector<InstanceSpec> specs =
          parse_instance_specs(read_text_file(instances_path));
      const InstanceSet set =
          build_instances(parse_records_csv(read_text_file(input)), specs);
      for (const DroppedInstance& d : set.dropped) {
        err << "dropped instance " << d.instance << ": " << d.reason << '\n';
      }
      const Method m = *parse_method(method_str);
      std::string text = "instance,series,bin,prob\n";
      for (const Instance& inst : set.instances) {
        const std::vector<ProbVec> fits = fit_method(m, inst, est_seed, est_solver);
        for (size_t j = 0; j < fits.size(); ++j) {
          for (size_t i = 0; i < fits[j].size(); ++i) {
            char num[64];
            const auto res = std::to_chars(num, num + sizeof num, fits[j][i]);
            text += inst.spec.name + ',' + inst.spec.series_chain[j] + ',' +
                    std::to_string(fits[j].support().bin(i)) + ',' +
                    std::string(num, res.ptr) + '\n';
          }
        }
      }
      std::ofstream f(out_path, std::ios::binary);
      f << text;
      f.close();
      if (!f) throw Error(ErrorCode::kIoError, "cannot write " + out_path);
      out << "fitted " << set.instances.size() << " instances with "
          << method_str << ", wrote " << out_path << '\n';
      return kExitOk;
    }
    if (*syn) {
      ExperimentConfig cfg = config_for(syn, syn_flags);
      if (!syn_flags.config.empty() && cfg.mode != ExperimentMode::kSynthetic) {
        throw Error(ErrorCode::kConfigError, "synth needs mode 'synthetic'");
      }
      cfg.mode = ExperimentMode::kSynthetic;
      print_report(run_experiment(cfg), out);
      return kExitOk;
    }
    if (*bench) {
      const ExperimentConfig cfg = config_for(bench, bench_flags);
      if (cfg.mode == ExperimentMode::kSynthetic) {
        throw Error(ErrorCode::kConfigError,
                    "bench needs mode 'surrogate' or 'csv'");
      }
      print_report(run_experiment(cfg), out);
      return kExitOk;
    }
    if (*oracle) {
      const OracleReport rep = run_oracle_check(oracle_seed, oracle_cases);
      out << "cases: " << rep.cases << '\n'
          << "max gap vs brute force: " << rep.max_brute_force_gap << '\n'
          << "max gap vs PAVA: " << rep.max_pava_gap << '\n';
      const bool ok = rep.max_brute_force_gap <= 1e-6 && rep.max_pava_gap <= 1e-6;
      out << (ok ? "OK" : "FAILED") << '\n';
      return ok ? kExitOk : kExitSolver;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace ordest
