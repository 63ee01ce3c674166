#pragma once

// Command-line front end. Exit codes: 0 success, 2 input / parse / IO error,
// 3 numeric or solver failure, 4 property check failed.

#include <iosfwd>

namespace kncond {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kncond
