#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcc {

// Entry point shared by the `pcc` binary and the tests. `args` excludes the
// program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcc
