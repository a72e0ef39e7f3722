#pragma once

#include <iosfwd>

namespace cubespec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// The `cubespec` command line. Subcommands: sample, stats, spectrum,
/// predict, experiment, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cubespec
