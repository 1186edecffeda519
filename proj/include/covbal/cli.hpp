#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covbal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (program name excluded). Reports go to `out`,
// diagnostics to `err`. Returns 0 on success, 2 on a usage error (unknown
// flag, invalid combination) and 1 when the data or a numeric step fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covbal::cli
