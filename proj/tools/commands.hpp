#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilhom::cli {

/// Runs one CLI invocation (args excludes the program name). Records go to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on a computation
/// error or failed self-test, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nilhom::cli
