#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace barrierfix {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNonRepairable = 2;
inline constexpr int kUnrepairable = 3;
inline constexpr int kTimeout = 4;
inline constexpr int kUsage = 64;
inline constexpr int kIoError = 74;
}  // namespace exit_code

// args excludes the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace barrierfix
