#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stve::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kNumericalError = 2,
  kInvalidArguments = 3,
};

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"estimate", "--input", "data.csv"}. Never throws; failures are reported on
/// `err` and mapped to an exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stve::cli
