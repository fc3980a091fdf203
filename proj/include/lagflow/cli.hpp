// Copyright 2026 The lagflow Authors
// SPDX-License-Identifier: Apache-2.0

// The lagflow command line. Results are JSON on `out`, diagnostics go to
// `err`. Exit codes: 0 success, 1 numerical failure, 2 precondition
// failure, 3 malformed input or usage.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lagflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitInput = 3;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lagflow::cli
