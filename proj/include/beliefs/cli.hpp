#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace beliefs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSanity = 2;

/// Runs one command line (without the program name): mine, assess, report or
/// synth. Returns the process exit code; never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beliefs
