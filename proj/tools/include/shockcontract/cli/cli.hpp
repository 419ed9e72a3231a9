#pragma once

#include <iosfwd>

namespace shockcontract::cli {

/// Parses argv, runs one subcommand and returns its exit code:
/// 0 success, 2 verdict FAIL, 1 error (including configuration errors).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shockcontract::cli
