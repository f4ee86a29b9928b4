#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lkpolar::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lkpolar::cli
