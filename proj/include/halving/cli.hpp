#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace halving {

/// Entry point of the `halving` command line tool. args[0] is the program
/// name. Output is buffered and only written to `out` when the command
/// succeeds; failures write one diagnostic line to `err` and return nonzero.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace halving
