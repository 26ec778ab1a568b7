#pragma once

// In-process entry point of the `eulerprof` command-line tool.
//
//   eulerprof <subcommand> [flags] [--config file]
//
// Subcommands: vr, cubical, distance, distmatrix, vectorize, evaluate,
// plotdata. A config file holds `key=value` lines (keys are flag names
// without dashes); flags given on the command line win. EULERPROF_WORKERS
// sets the default worker count.
//
// Exit codes: 0 success, 1 computation/format error, 2 usage error. Errors are
// printed as one line: `eulerprof: error[<kind>]: <message>`.

#include <iosfwd>
#include <string>
#include <vector>

namespace eulerprof::cli {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eulerprof::cli
