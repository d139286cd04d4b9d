#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freecat::cli {

// Runs the command-line interface on the given arguments (without argv[0]).
// Verdicts are data and exit with 0; errors are failures:
//   2  parse / type / usage errors
//   3  resource limit exceeded
//   4  oracle disagreement under --cross-check
//   1  a proof script failed to check
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freecat::cli
