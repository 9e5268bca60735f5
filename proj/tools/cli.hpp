#pragma once

#include <string>
#include <vector>

namespace judge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command line (args excludes the program name). Output directory
// defaults to $JUDGE_OUT_DIR, else "judge_out".
int dispatch(const std::vector<std::string>& args);

} // namespace judge::cli
