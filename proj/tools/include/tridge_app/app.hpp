#pragma once

#include <iosfwd>
#include <string>

#include "tridge/glm.hpp"

namespace tridge::app {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kBadInput = 2,
    kSolverFailure = 3,
    kCheckFailed = 4,
};

/// Runs the command line `argv` and returns the exit code. Results go to
/// `out` unless redirected with --output; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses a CSV whose header starts with `y`. Throws InvalidData naming the
/// 1-based line and column of the first malformed cell.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

} // namespace tridge::app
