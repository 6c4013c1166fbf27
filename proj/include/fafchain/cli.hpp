#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fafchain::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kNotConverged = 2,
};

/// Parses argv (argv[0] is the program name), runs one subcommand and
/// writes the result to --out or to `out`. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fafchain::cli
