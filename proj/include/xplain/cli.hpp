#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xplain {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // limits hit, internal errors
inline constexpr int kExitInput = 2;    // parse or validation errors
inline constexpr int kExitNo = 3;       // no witness, or the witness is invalid

// Runs `xplain <args...>`; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xplain
