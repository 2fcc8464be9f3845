#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chainfair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable naming the directory for relative --output paths.
inline constexpr const char* kOutputDirEnv = "CHAINFAIR_OUTPUT_DIR";

/// Runs one invocation. args excludes the program name. Results go to `out`
/// unless --output is given; diagnostics go to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainfair::cli
