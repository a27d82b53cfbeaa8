#pragma once

#include <iosfwd>

namespace oscint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitContractFailure = 2;

/// Entry point of the `oscint` command line tool. Output that the user asked
/// for goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oscint::cli
