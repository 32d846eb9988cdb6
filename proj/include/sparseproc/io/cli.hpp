#pragma once

#include <iosfwd>

namespace sparseproc::io {

enum ExitCode : int {
  kExitOk = 0,
  kExitChecksFailed = 1,
  kExitModelError = 2,
  kExitUsage = 3,
};

/// Entry point of the `sparseproc` tool: subcommands bspline, filters,
/// generate, stats and validate. Diagnostics go to `err`, CSV to `out` when
/// no output path is given.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparseproc::io
