#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace korodisc {

/// Entry point of the `korodisc` tool; args excludes the program name.
/// Returns the process exit code: 0 success, 1 other failure, 2 precondition,
/// 3 resource limit, 4 cross-method inconsistency.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace korodisc
