#pragma once

#include <iosfwd>

namespace bhtrl {

/// Entry point of the `bhtrl` tool. Exit codes: 0 success, 1 runtime error,
/// 2 usage or config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bhtrl
