#pragma once

#include <string>
#include <vector>

namespace alge::cli {

/// Runs one CLI command (argv without the program name). Exit codes:
/// 0 success, 1 usage error, 2 data error, 3 numerical failure.
int run(std::vector<std::string> args);

}  // namespace alge::cli
