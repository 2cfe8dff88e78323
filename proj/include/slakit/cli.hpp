#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slakit::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kUsage = 2,
  kIoError = 3,
};

/// Runs one `sla` invocation. `args` excludes the program name. Payloads
/// (JSON) go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace slakit::cli
