#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzoracle::cli {

inline constexpr int kExitNonBuggy = 0;
inline constexpr int kExitBuggy = 1;
inline constexpr int kExitError = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fuzzoracle::cli
