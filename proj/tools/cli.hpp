#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lle::cli {

// Runs one subcommand. args excludes the program name.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lle::cli
