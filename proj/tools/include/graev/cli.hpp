#pragma once

#include <ostream>

namespace graev::cli {

inline constexpr int kExitOk = 0;
/// A property was refuted or an input failed validation.
inline constexpr int kExitRefuted = 1;
/// Bad flags or unreadable input.
inline constexpr int kExitUsage = 2;

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// JSON goes to `out` unless --out names a file; messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace graev::cli
