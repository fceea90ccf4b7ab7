#pragma once

#include <iostream>
#include <string>
#include <vector>

// Command-line front end. Subcommands: capacity, simulate, verify, sweep.
// Exit codes: 0 success, 1 numerical/runtime errors (CutoffTooSmall etc.),
// 2 argument or config errors. Environment: SEQDEC_WORKERS overrides the
// worker count, SEQDEC_OUTDIR prefixes relative output paths.
namespace seqdec::cli {

int run(const std::vector<std::string>& argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace seqdec::cli
