#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smcsweep::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitJobFailure = 2,
  kExitPartial = 3,
};

// Runs one invocation. `args` includes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args);

}  // namespace smcsweep::cli
