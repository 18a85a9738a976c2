#pragma once

#include <iosfwd>

namespace botsim::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit status; diagnostics go to `err`, reports to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace botsim::cli
