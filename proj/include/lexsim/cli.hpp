#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexsim {

// Runs the command line `args` (program name excluded). Returns 0 on
// success, 1 on bad input and 2 when an internal invariant breaks.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexsim
