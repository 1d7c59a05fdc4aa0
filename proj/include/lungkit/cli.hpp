#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lungkit::cli {

/// Runs one subcommand. `args` excludes the program name. Returns the process
/// exit status: 0 success, 2 usage error, 3 data error, 4 numeric error.
/// Failures print "E_<CODE>: message" as a single line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lungkit::cli
