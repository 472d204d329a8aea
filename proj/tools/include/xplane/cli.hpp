#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xplane::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInfeasible = 1;
inline constexpr int kInputError = 2;

int run(int argc, char** argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xplane::cli
