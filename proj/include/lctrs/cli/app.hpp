#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lctrs {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs the tool on `args` (without the program name):
///
///   analyze FILE | ccp FILE | cpcp FILE | ground FILE | check FILE | gen-pcp PAIRS
///
/// with --criteria, --depth, --values, --smt, --timeout and --json.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lctrs
