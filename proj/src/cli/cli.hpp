#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zenoest::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericFailure = 3,
  kImpossibleRecord = 4,
};

/// Runs one subcommand; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zenoest::cli
