#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causal::cli {

// Exit codes: 0 success, 1 domain error, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The text printed by --help after the option list.
const std::string& formats_help();

}  // namespace causal::cli
