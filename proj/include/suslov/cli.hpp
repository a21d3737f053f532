#pragma once

#include <iosfwd>

namespace suslov::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // failed --assert check or I/O error
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitFit = 4;

// Entry point of `suslov run|compare|consistency|plot-scripts`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace suslov::cli
