#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinel {

/// Runs the command-line driver (elab / check / norm / verify) against the
/// given streams. `args` excludes the program name. Returns the process exit
/// code: 0 success, 1 user or type error, 2 resource limit.
int runCli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace spinel
