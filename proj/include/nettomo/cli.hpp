#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nettomo {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitIdentification = 3;
inline constexpr int kExitCapacity = 4;

// Entry point for the `nettomo` tool; `args` excludes the program name.
// Subcommands: simulate, identify, sieve, report, census.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nettomo
