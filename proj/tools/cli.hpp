#pragma once

#include <iosfwd>

namespace somf::cli {

/// Runs the command line; returns the process exit code (0 pass, 1 verification failure, 2 usage or config error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace somf::cli
