#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace form::cli {

/// Exit codes of the form_lab tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the tool on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace form::cli
