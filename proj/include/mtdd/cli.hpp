#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtdd {

// exit codes: 0 ok / equal / zero, 1 unequal / nonzero verdicts,
// 2 cap or limit exceeded, 3 any other failure
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtdd
