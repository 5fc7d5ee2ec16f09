#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsbn::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kNumerical = 3,
  kCapacity = 4,
  kInconclusive = 5,
};

/// Runs one `dsbn` invocation; reports go to `out` unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsbn::cli
