#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cars::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitNumerical = 4,
};

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` (or to the files named by --out/--report), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cars::cli
