// Copyright 2026 The ReachBot Planar Simulator Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "test_util.hpp"

#ifndef REACHBOT_CLI_PATH
#define REACHBOT_CLI_PATH "reachbot"
#endif

namespace {

namespace fs = std::filesystem;

int run_shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

int run_cli(const std::string& args) {
  return run_shell(std::string(REACHBOT_CLI_PATH) + " " + args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST_CASE("validate accepts the shipped scenarios") {
  for (const char* name :
       {"hallway.json", "trade_steps.json", "model_error.json",
        "fos_stance.json"}) {
    CHECK(run_cli("validate --scenario " +
                  reachbot::testutil::scenario_path(name)) == 0);
  }
}

TEST_CASE("validate rejects a broken scenario with exit code 1") {
  const fs::path dir = fs::temp_directory_path() / "reachbot_cli_test";
  fs::create_directories(dir);
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{\"anchors\": {}}";
  CHECK(run_cli("validate --scenario " + bad.string()) == 1);

  // Missing file is an I/O failure.
  CHECK(run_cli("validate --scenario " + (dir / "nope.json").string()) == 3);
}

TEST_CASE("unknown flags are errors") {
  CHECK(run_cli("validate --scenario x --bogus") != 0);
  CHECK(run_cli("frobnicate") != 0);
}

TEST_CASE("help text enumerates every flag") {
  const fs::path dir = fs::temp_directory_path() / "reachbot_cli_help";
  fs::create_directories(dir);
  const fs::path help = dir / "help.txt";
  const std::string cli(REACHBOT_CLI_PATH);
  CHECK(std::system(
            (cli + " --help > " + help.string() + " 2>&1").c_str()) == 0);
  std::string text = slurp(help);
  for (const char* sub : {"run", "fos", "trade", "validate"}) {
    CHECK(text.find(sub) != std::string::npos);
  }
  CHECK(std::system(
            (cli + " run --help > " + help.string() + " 2>&1").c_str()) == 0);
  text = slurp(help);
  for (const char* flag : {"--scenario", "--noise-sigma", "--mass-scale",
                           "--inertia-scale", "--out", "--sample-every"}) {
    CHECK(text.find(flag) != std::string::npos);
  }
  CHECK(std::system(
            (cli + " fos --help > " + help.string() + " 2>&1").c_str()) == 0);
  text = slurp(help);
  for (const char* flag : {"--pretension", "--grid", "--range"}) {
    CHECK(text.find(flag) != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("non-convergent runs exit with code 2") {
  const fs::path dir = fs::temp_directory_path() / "reachbot_cli_budget";
  fs::create_directories(dir);
  // Shrink the budget far below what the single step movement needs.
  std::ifstream in(reachbot::testutil::scenario_path("model_error.json"));
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  const auto pos = text.find("\"duration_budget_s\": 120.0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 26, "\"duration_budget_s\": 0.5");
  const fs::path tight = dir / "tight.json";
  std::ofstream(tight) << text;

  CHECK(run_cli("run --scenario " + tight.string() + " --out " +
                (dir / "out").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("REACHBOT_SEED overrides the scenario seeds") {
  const fs::path dir = fs::temp_directory_path() / "reachbot_cli_seed";
  fs::remove_all(dir);
  const std::string scenario =
      reachbot::testutil::scenario_path("model_error.json");
  const std::string base = "run --scenario " + scenario +
                           " --noise-sigma 0.05 --sample-every 20 --out ";

  const std::string cli(REACHBOT_CLI_PATH);
  CHECK(run_shell("env REACHBOT_SEED=7 " + cli + " " + base +
                  (dir / "a").string()) == 0);
  CHECK(run_shell("env REACHBOT_SEED=7 " + cli + " " + base +
                  (dir / "b").string()) == 0);
  CHECK(run_shell("env REACHBOT_SEED=8 " + cli + " " + base +
                  (dir / "c").string()) == 0);
  const std::string a = slurp(dir / "a" / "trace.csv");
  CHECK(a == slurp(dir / "b" / "trace.csv"));
  CHECK(a != slurp(dir / "c" / "trace.csv"));
  fs::remove_all(dir);
}

TEST_CASE("run produces trace, summary and plots under --out") {
  const fs::path dir = fs::temp_directory_path() / "reachbot_cli_run";
  fs::remove_all(dir);

  // A short scenario keeps this test quick: reuse the model-error file.
  const std::string scenario =
      reachbot::testutil::scenario_path("model_error.json");
  CHECK(run_cli("run --scenario " + scenario + " --out " + dir.string() +
                " --sample-every 10") == 0);
  for (const char* f :
       {"trace.csv", "summary.json", "trajectory.svg", "errors.svg"}) {
    CHECK(fs::exists(dir / f));
  }
  const std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"completed\": true") != std::string::npos);

  // Determinism end to end: rerunning overwrites with identical bytes.
  const std::string trace_a = slurp(dir / "trace.csv");
  CHECK(run_cli("run --scenario " + scenario + " --out " + dir.string() +
                " --sample-every 10") == 0);
  CHECK(slurp(dir / "trace.csv") == trace_a);
  fs::remove_all(dir);
}

TEST_CASE("fos reports a larger safe region with pretension") {
  const fs::path dir0 = fs::temp_directory_path() / "reachbot_cli_fos0";
  const fs::path dir1 = fs::temp_directory_path() / "reachbot_cli_fos1";
  fs::remove_all(dir0);
  fs::remove_all(dir1);
  const std::string scenario =
      reachbot::testutil::scenario_path("fos_stance.json");
  CHECK(run_cli("fos --scenario " + scenario +
                " --pretension 0 --grid 12x12 --range 100 100 --out " +
                dir0.string()) == 0);
  CHECK(run_cli("fos --scenario " + scenario +
                " --pretension 100 --grid 12x12 --range 100 100 --out " +
                dir1.string()) == 0);

  const auto cells = [](const std::string& text) {
    const auto pos = text.find("\"cells_fos_ge_1\": ");
    REQUIRE(pos != std::string::npos);
    return std::atoi(text.c_str() + pos + 18);
  };
  const int without = cells(slurp(dir0 / "fos_summary.json"));
  const int with = cells(slurp(dir1 / "fos_summary.json"));
  CHECK(with >= without);
  CHECK(fs::exists(dir0 / "fos.svg"));
  CHECK(fs::exists(dir0 / "fos_grid.csv"));
  fs::remove_all(dir0);
  fs::remove_all(dir1);
}

}  // namespace
