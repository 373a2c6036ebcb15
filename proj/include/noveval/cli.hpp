#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace noveval::cli {

// Process exit codes. Stable contract for scripts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O and anything unexpected
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMismatch = 3;  // labels/datasets do not line up
inline constexpr int kExitFormat = 4;    // unreadable or invalid input file

// Runs the `noveval` command line. args excludes the program name.
// Tables and summaries go to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err);

}  // namespace noveval::cli
