#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moran {

/// Runs one command; args exclude the program name. Exit codes: 0 verdict
/// computed, 1 input error, 2 resource bound reached.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace moran
