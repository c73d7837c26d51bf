#pragma once

// Batch front-end behind the `zeroform` executable.

#include <iosfwd>
#include <string>
#include <vector>

namespace zeroform::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

/// Runs `zeroform <command> [problem.json] [flags]`. `args` excludes the
/// program name. Reports go to `out`; diagnostics for humans go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zeroform::cli
