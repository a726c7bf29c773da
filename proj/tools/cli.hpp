#pragma once

#include <ostream>

namespace contrastfs::cli {

/// Runs the command line. Exit codes: 0 success, 1 usage error, 2 data error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contrastfs::cli
