#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace urnet::cli {

// Exit codes: 0 success, 1 runtime error, 2 validation or usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace urnet::cli
