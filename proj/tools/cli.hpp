#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qprob::cli {

/// Environment variable naming the directory that relative --out paths
/// resolve against.
inline constexpr const char* kOutDirEnv = "QPROB_OUT_DIR";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitPrecondition = 3;

/// Runs one invocation. args excludes the program name. Output without
/// --out goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qprob::cli
