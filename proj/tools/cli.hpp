#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chfn::cli {

/// Runs one command line (without the program name). Reports go to `out`,
/// or to the --out file; diagnostics and usage go to `err`.
/// Returns 0 when every check passes, 1 when a check fails, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chfn::cli
