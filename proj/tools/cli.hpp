#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hosr::cli {

/// Runs one `hosr` invocation. `args` excludes the program name. Returns the
/// process exit code; diagnostics go to `err`, command output to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hosr::cli
