#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rze::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

/// Runs one command line (args[0] is the program name). Normal output goes to
/// `out`; failures print a single `error kind=... message="..."` line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rze::cli
