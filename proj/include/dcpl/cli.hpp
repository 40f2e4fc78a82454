#pragma once

#include <ostream>

namespace dcpl {

// Exit codes of the command-line harness.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitPrecondition = 3,
};

// Entry point of the `dcpl` tool: subcommands solve, converge, taylor, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcpl
