#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hodgefaas::cli {

/// Exit codes: 0 success, 1 validation failure, 2 I/O/parse or usage error,
/// 3 numerical inconsistency.
enum ExitCode : int { kOk = 0, kValidation = 1, kInput = 2, kNumerical = 3 };

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hodgefaas::cli
