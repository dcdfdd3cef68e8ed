// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "polylab/stats.hpp"
#include "polylab/suites.hpp"

namespace polylab {

// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_tolerance = 1,   // a configured tolerance failed
  exit_usage = 2,       // unknown flag or subcommand, missing argument
  exit_value = 3,       // a value failed conversion or validation
  exit_file = 4,        // config file not found or unreadable
  exit_runtime = 5,     // capability or numerical error while running
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct RunConfig {
  std::string command;
  std::string subcommand;
  int threads = 0;  // 0: POLYLAB_THREADS or the OpenMP default
  std::string out_dir = ".";
  std::string json_path;  // empty: <out_dir>/polylab-<command>-<subcommand>.json
  std::string csv_path;   // same, with .csv
  bool help = false;
  std::string help_text;

  OracleConfig oracle;
  IdentitySuiteConfig identities;
  ConvergenceConfig convergence;
  BrownianIdentityConfig brownian;
  ReplicaSpec sample;
  InequalityConfig inequalities;
  BusemannConfig busemann;
  RemainderTailConfig remainder;
  DistributionSuiteConfig distributions;
  KconcaveConfig kconcave;

  std::string json_file() const;
  std::string csv_file() const;
};

// args excludes the program name. A `--config FILE` holds flat `key = value`
// lines naming long flags of the selected subcommand or the root; flags on
// the command line win. Throws CliError with the exit code to use.
RunConfig parse_cli(const std::vector<std::string>& args);

// Runs the configured command and writes its JSON report (always) and CSV
// table (where the command has one).
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polylab
