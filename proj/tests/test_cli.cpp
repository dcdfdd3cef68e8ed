// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "polylab/cli.hpp"

using namespace polylab;

namespace {

int exit_code_of(const std::vector<std::string>& args) {
  try {
    parse_cli(args);
    return exit_ok;
  } catch (const CliError& e) {
    return e.code();
  }
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("polylab-unit-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("flags land in the run config") {
  const auto c = parse_cli({"verify", "identities", "--n", "3", "--grid", "4096", "--seed", "7"});
  CHECK(c.command == "verify");
  CHECK(c.subcommand == "identities");
  CHECK(c.identities.n_max == 3);
  CHECK(c.identities.grid == 4096);
  CHECK(c.identities.families == std::vector<std::string>{"sin-poly", "random:7", "random:8"});
  const IdentitySuiteConfig defaults;
  CHECK(c.identities.n_min == defaults.n_min);
  CHECK(c.identities.wf_n_max == defaults.wf_n_max);
  CHECK(c.threads == 0);
}

TEST_CASE("command-line flags override the config file") {
  const auto dir = scratch_dir("config");
  const auto file = dir / "run.cfg";
  std::ofstream(file) << "# test\ngrid = 1024\nn = 2\nthreads = 2\n";
  const auto c = parse_cli({"--config", file.string(), "verify", "identities", "--grid", "2048"});
  CHECK(c.identities.grid == 2048);
  CHECK(c.identities.n_max == 2);
  CHECK(c.threads == 2);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_of({"verify", "identities", "--grid", "0"}) == exit_value);
  CHECK(exit_code_of({"verify", "identities", "--grid", "abc"}) == exit_value);
  CHECK(exit_code_of({"verify", "identities", "--bogus"}) == exit_usage);
  CHECK(exit_code_of({"verify"}) == exit_usage);
  CHECK(exit_code_of({"sample", "oy"}) == exit_usage);
  CHECK(exit_code_of({"--config", "/nonexistent/polylab.cfg", "verify", "oracle"}) == exit_file);
  CHECK(exit_code_of({"check", "distributions", "--check", "nope"}) == exit_value);
}

TEST_CASE("help exits cleanly") {
  std::ostringstream out, err;
  const char* argv[] = {"polylab", "--help"};
  CHECK(run_cli(2, argv, out, err) == exit_ok);
  CHECK(out.str().find("verify") != std::string::npos);
}

TEST_CASE("sample writes JSON and CSV") {
  const auto dir = scratch_dir("sample");
  std::ostringstream out, err;
  const std::string d = dir.string();
  const char* argv[] = {"polylab", "--out-dir", d.c_str(), "sample", "oy", "--quantity", "line",
                        "--args", "1,0.5", "--replicas", "3", "--n", "4", "--T", "1", "--grid", "64"};
  REQUIRE(run_cli(17, argv, out, err) == exit_ok);
  std::ifstream csv(dir / "polylab-sample-oy.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "replica,quantity,arg1,arg2,arg3,value");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 3);
  std::ifstream js(dir / "polylab-sample-oy.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j["status"] == "pass");
  CHECK(j["rows"] == 3);
}

TEST_CASE("runtime errors still write a report") {
  const auto dir = scratch_dir("error");
  std::ostringstream out, err;
  const std::string d = dir.string();
  const char* argv[] = {"polylab", "--out-dir", d.c_str(), "sample", "oy", "--quantity", "line", "--args", "9,0.5",
                        "--replicas", "1", "--n", "4", "--grid", "64"};
  CHECK(run_cli(15, argv, out, err) == exit_runtime);
  std::ifstream js(dir / "polylab-sample-oy.json");
  CHECK(nlohmann::json::parse(js)["status"] == "error");
}
