#pragma once

#include <string>
#include <vector>

namespace fcount::cli {

/// Run the fcount command line. Exposed as a library call so tests can
/// drive the tool in-process.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace fcount::cli
