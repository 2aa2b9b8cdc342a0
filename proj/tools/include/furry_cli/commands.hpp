#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "furry_cli/config.hpp"

namespace furry::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kConfigFailure = 2, kNumericalFailure = 3 };

struct CommandOptions {
  int threads = 1;
  std::ostream* log = nullptr;  // progress and errors; defaults to std::cerr
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool hard = true;  // diagnostics only warn
  std::string note;
};

// Oracle suite behind `validate`. Throws on config or numerical errors.
std::vector<CheckResult> run_validation(const RunConfig& cfg);

// Each returns an exit code and may throw furry errors.
int cmd_validate(const RunConfig& cfg, const CommandOptions& opt);
int cmd_one_particle(const RunConfig& cfg, const CommandOptions& opt);
int cmd_converge(const RunConfig& cfg, const CommandOptions& opt);
int cmd_nbody(const RunConfig& cfg, const CommandOptions& opt);

// Dispatch by subcommand name, mapping exceptions to the exit-code contract.
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt);

}  // namespace furry::cli
