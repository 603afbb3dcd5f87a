#pragma once

#include <iosfwd>

namespace ewgame {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
/// A prediction was contradicted under satisfied hypotheses, or a check failed.
inline constexpr int kExitMismatch = 1;
/// Bad flags or a malformed/invalid config; the input schema is printed.
inline constexpr int kExitUsage = 2;

/// Entry point of the `ewgame` tool. Subcommands: classify, simulate, sweep,
/// verify-ce, oscillate, bank, verify-all. Results go to `out` (or to files
/// under --out DIR), diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, writing to std::cout / std::cerr.
int cli_main(int argc, const char* const* argv);

}  // namespace ewgame
