#pragma once

#include <ostream>

namespace zsect {

inline constexpr const char* kToolVersion = "zsect 1.0.0";

/// Entry point of the command-line tool. Exit codes: 0 success, 1 domain or usage
/// error, 2 failed numerical verification.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zsect
