#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace railload::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_input = 3;
inline constexpr int exit_numerical = 4;

/// Runs one command line (args[0] is the program name) and returns its exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace railload::cli
