#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lieorder::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kValidationError = 2,
  kTruncated = 3,
  kDivergence = 4,
  kVerificationFailure = 5,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Comma-separated decimal literals. Throws ConfigError.
std::vector<double> parse_vector(const std::string& text);

}  // namespace lieorder::cli
