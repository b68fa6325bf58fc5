#pragma once

namespace netdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `netdyn` command line tool.
int run(int argc, const char* const* argv);

}  // namespace netdyn::cli
