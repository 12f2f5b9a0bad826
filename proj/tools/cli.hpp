// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace abcnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one invocation. args excludes the program name. The JSON report goes
/// to `out` unless --report names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abcnet::cli
