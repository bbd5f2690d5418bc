#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hydro::cli {

/// Exit codes: 0 all ProvenPass, 1 some Fail, 2 probabilistic or
/// inconclusive only, 3 input or usage error.
enum Exit { Pass = 0, Failed = 1, Inconclusive = 2, InputProblem = 3 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace hydro::cli
