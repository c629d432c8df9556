#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace satnls::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,      // audit failure, spectral violation, invalid run, numerical failure
  kParameterBreach = 2,  // config or model invariant broken
  kMissingPrerequisite = 3,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace satnls::cli
