#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace exlab::cli {

/// Exit codes of `run`.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;    ///< usage or validation error
inline constexpr int kRegression = 2; ///< derivation mismatch or failed verification

/// Environment variable naming the directory for relative --out paths.
inline constexpr const char *kOutputDirEnv = "EXLAB_OUTPUT_DIR";

/// Runs one command line (args excludes the program name). Results go to out,
/// diagnostics and the resolved configuration to err.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace exlab::cli
