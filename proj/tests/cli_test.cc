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

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace ordest {
namespace {

namespace fs = std::filesystem;

struct BinaryRun {
  int code;
  std::string out;
};

// Runs the installed binary through the shell; stderr is folded into out.
BinaryRun run_binary(const std::string& args) {
  const std::string cmd = std::string(ORDEST_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  BinaryRun r{-1, ""};
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct InProcess {
  int code;
  std::string out;
  std::string err;
};

InProcess run_in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "ordest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ordest_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream f(path(name), std::ios::binary);
    f << text;
    return path(name);
  }
  std::string records() const {
    std::string text = "series,bin,count,split\n";
    for (const char* s : {"a", "b"}) {
      for (int b = 0; b < 8; ++b) {
        const int c = 1 + (s[0] == 'a' ? 7 - b : b);
        for (const char* split : {"train", "test"}) {
          text += std::string(s) + "," + std::to_string(b) + "," + std::to_string(c) +
                  "," + split + "\n";
        }
      }
    }
    return write("records.csv", text);
  }

  fs::path dir_;
};

TEST_F(CliTest, Version) {
  const BinaryRun r = run_binary("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("ordest ", 0), 0u);
}

TEST_F(CliTest, HelpOnEverySubcommand) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> subs{
      {"estimate", {"--input", "--instances", "--method", "--out", "--seed",
                    "--time-limit", "--node-limit"}},
      {"synth", {"--config", "--out-dir", "--seed", "--trials", "--workers",
                 "--time-limit", "--node-limit"}},
      {"bench", {"--config", "--out-dir", "--seed", "--trials", "--workers",
                 "--time-limit", "--node-limit"}},
      {"oracle-check", {"--seed", "--cases"}}};
  for (const auto& [name, flags] : subs) {
    const BinaryRun r = run_binary(name + " --help");
    EXPECT_EQ(r.code, 0) << name;
    for (const auto& f : flags) EXPECT_NE(r.out.find(f), std::string::npos) << name << f;
  }
  EXPECT_EQ(run_binary("--help").code, 0);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_binary("").code, kExitUsage);
  EXPECT_EQ(run_binary("frobnicate").code, kExitUsage);
  const InProcess r = run_in_process(
      {"estimate", "--input", path("missing.csv"), "--instances", path("missing.json"),
       "--method", "EMP", "--out", path("o.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--input"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run_in_process({"estimate", "--input", records(), "--instances", records(),
                            "--method", "KDE", "--out", path("o.csv")})
                .code,
            kExitUsage);
  EXPECT_EQ(run_in_process({"oracle-check", "--cases", "0"}).code, kExitUsage);
}

TEST_F(CliTest, OracleCheckPasses) {
  const BinaryRun r = run_binary("oracle-check --seed 7 --cases 10");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("OK"), std::string::npos);
}

TEST_F(CliTest, EstimateWritesFits) {
  const std::string inst = write(
      "instances.json",
      R"([{"name": "pair", "series": ["a", "b"], "support": [0, 7], "min_records": 10}])");
  for (const char* m : {"EMP", "GAUSSIAN", "KERNEL", "UNIMODAL", "OURS"}) {
    const InProcess r = run_in_process({"estimate", "--input", records(), "--instances",
                                        inst, "--method", m, "--out", path("fit.csv")});
    ASSERT_EQ(r.code, 0) << m << r.err;
    std::ifstream f(path("fit.csv"));
    std::string line;
    std::getline(f, line);
    EXPECT_EQ(line, "instance,series,bin,prob");
    double total[2] = {0, 0};
    int rows = 0;
    while (std::getline(f, line)) {
      std::stringstream ls(line);
      std::string name, series, bin, prob;
      std::getline(ls, name, ',');
      std::getline(ls, series, ',');
      std::getline(ls, bin, ',');
      std::getline(ls, prob, ',');
      EXPECT_EQ(name, "pair");
      total[series == "b"] += std::stod(prob);
      ++rows;
    }
    EXPECT_EQ(rows, 16) << m;
    EXPECT_NEAR(total[0], 1.0, 1e-9);
    EXPECT_NEAR(total[1], 1.0, 1e-9);
  }
}

TEST_F(CliTest, BenchWithMissingSeriesIsDataError) {
  const std::string cfg = write(
      "bench.json", R"({"mode": "csv", "input_path": ")" + records() +
                        R"(", "instances": [{"name": "x", "series": ["a", "qq_missing"],
                        "support": [0, 7], "min_records": 1}], "n_grid": [5], "trials": 1})");
  const BinaryRun r = run_binary("bench --config " + cfg + " --out-dir " + path("out"));
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.out.find("qq_missing"), std::string::npos);
}

TEST_F(CliTest, BenchRejectsBadConfig) {
  const std::string cfg = write("bad.json", R"({"mode": "surrogate", "bogus": 1})");
  const InProcess r = run_in_process({"bench", "--config", cfg, "--out-dir", path("o")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  const std::string syn = write("syn.json", R"({"mode": "synthetic"})");
  EXPECT_EQ(run_in_process({"bench", "--config", syn, "--out-dir", path("o")}).code,
            kExitData);
}

TEST_F(CliTest, BenchWritesOnlyIntoOutDir) {
  const std::string cfg = write(
      "sur.json",
      R"({"mode": "surrogate", "chain_lengths": [2], "support": [-12, 12], "spacing": 4,
          "sigma2": 5, "n_grid": [6], "trials": 2, "methods": ["EMP", "OURS"]})");
  const BinaryRun r = run_binary("bench --config " + cfg + " --out-dir " + path("out") +
                           " --workers 2 --seed 5");
  ASSERT_EQ(r.code, 0) << r.out;
  std::vector<std::string> top;
  for (const auto& e : fs::directory_iterator(dir_)) top.push_back(e.path().filename());
  std::sort(top.begin(), top.end());
  EXPECT_EQ(top, (std::vector<std::string>{"out", "sur.json"}));
  EXPECT_TRUE(fs::exists(path("out/results.csv")));
  EXPECT_NE(r.out.find("OURS"), std::string::npos);
}

TEST_F(CliTest, SynthFlagsOverrideConfig) {
  const std::string cfg = write(
      "syn.json", R"({"methods": ["EMP"], "n_grid": [4], "trials": 50, "seed": 1})");
  const InProcess r = run_in_process({"synth", "--config", cfg, "--out-dir",
                                      path("out"), "--trials", "3", "--workers", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path("out/results.csv"));
  int lines = 0;
  for (std::string line; std::getline(f, line);) ++lines;
  EXPECT_EQ(lines, 1 + 3 * 2);
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::kNumericalFailure), kExitSolver);
  EXPECT_EQ(exit_code_for(ErrorCode::kTooLarge), kExitSolver);
  EXPECT_EQ(exit_code_for(ErrorCode::kMissingSeries), kExitData);
  EXPECT_EQ(exit_code_for(ErrorCode::kParseError), kExitData);
  EXPECT_EQ(exit_code_for(ErrorCode::kConfigError), kExitData);
}

}  // namespace
}  // namespace ordest
