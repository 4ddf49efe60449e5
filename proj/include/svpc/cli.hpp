#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace svpc {

// Entry point of the command-line tool, linkable for tests. args excludes
// the program name. Exit codes: verdicts map to 0 (svpc) / 1 (not svpc) /
// 2 (inconclusive); other successful runs return 0; input problems 10, grid
// or invariance problems 11, internal failures 12.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace svpc
