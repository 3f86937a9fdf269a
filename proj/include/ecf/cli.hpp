#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ecf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the command line `args` (program name excluded). Data named "-" is
/// read from `in`; results go to `out` unless --output is given; diagnostics
/// go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ecf::cli
