#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ucfg::cli {

/// Exit codes.
inline constexpr int kExitDefinitive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBounded = 2;  // UpTo / Unknown verdicts
inline constexpr int kExitUsage = 64;

/// args[0] is the program name. Reports go to `out` as JSON, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace ucfg::cli
