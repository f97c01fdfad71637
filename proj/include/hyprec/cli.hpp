#pragma once

#include <iosfwd>

namespace hyprec {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Runs the hyprec command line. Results go to `out`; diagnostics, logs and
/// error JSON go to `err`. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyprec
