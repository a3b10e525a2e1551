#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homeolife::cli {

// Runs one command line (args excludes the program name) and returns the
// process exit status. Tables go to `out` when no output directory is given.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err);

}  // namespace homeolife::cli
