#pragma once

// Command-line front end. Exit codes: 0 success, 1 typed-but-compromised or
// violated, 2 type or inference error, 3 usage/file/parse error, 4
// inconclusive.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nmpl {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitTypeError = 2;
constexpr int kExitInput = 3;
constexpr int kExitInconclusive = 4;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0..2" or "0,1,2".
std::vector<std::uint64_t> parse_domain(const std::string& text);

}  // namespace nmpl
