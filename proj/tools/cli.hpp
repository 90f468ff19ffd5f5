#pragma once

#include <ostream>

namespace membrane::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. Verdicts and summaries go to `out`, diagnostics and
// usage text to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace membrane::cli
