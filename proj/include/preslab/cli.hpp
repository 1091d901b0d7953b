#pragma once

#include <string>
#include <vector>

// Command-line front end. run() takes the full argv (program name first)
// and returns the process exit code:
//   0  success / no counterexample
//   1  property violated or counterexample found
//   2  usage or input error
// Results go to stdout, diagnostics to stderr.

namespace preslab::cli {

int run(const std::vector<std::string>& args);

}  // namespace preslab::cli
