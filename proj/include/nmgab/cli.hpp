#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nmgab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInputError = 2;

/// Entry point of the nmgab tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmgab
