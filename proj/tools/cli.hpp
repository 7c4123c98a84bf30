#pragma once

#include <iosfwd>

namespace pu::cli {

/// Exit codes of the `pu` tool.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kInvalidInput = 2,
  kDegeneracyMisuse = 3,
};

/// Runs the command line against the given streams; `out` receives the
/// primary document unless --out redirects it, `err` receives diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pu::cli
