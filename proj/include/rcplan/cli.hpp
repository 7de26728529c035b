#pragma once

#include <cstdint>
#include <iosfwd>

namespace rcplan {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitQuality = 2 };

/// Entry point of the `rcplan` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rcplan
