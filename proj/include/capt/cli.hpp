#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace capt {

/// Command dispatcher behind the `capt` binary; tests call it in-process.
/// Exit codes: 0 success (1 = color ran to green termination), 2 invalid
/// input, 3 decomposition failure, 4 infeasible window/resolution.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace capt
