#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bvgraph::cli {

/// Runs one command line (without the program name). Returns 0 when every
/// check passes, 1 when some check fails and 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bvgraph::cli
