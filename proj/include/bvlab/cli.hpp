#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bvlab {

/// Runs one command line (args exclude the program name). Returns 0 on
/// success, 1 when a checked claim or condition fails, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bvlab
