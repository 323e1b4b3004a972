#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perimere::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitBudget = 2;

/// Runs the command line `args` (without the program name). Regular output
/// goes to `out` unless --out is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perimere::cli
