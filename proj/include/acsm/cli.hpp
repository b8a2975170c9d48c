#pragma once
// Command-line surface: compare, retrieve, bench, gen.
//
// Exit codes: 0 success, 2 input or usage error, 1 internal error.

#include <iosfwd>

namespace acsm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

/// Parses argv (argv[0] is the program name) and runs the chosen command.
/// Data goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acsm::cli
