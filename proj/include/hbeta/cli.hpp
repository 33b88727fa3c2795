#pragma once

#include <string>
#include <vector>

namespace hbeta::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRuntime = 2;

int dispatch(int argc, char** argv);

/// Same as dispatch; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace hbeta::cli
