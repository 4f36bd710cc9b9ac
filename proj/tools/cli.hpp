#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace projgeom::cli {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 verdict failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projgeom::cli
