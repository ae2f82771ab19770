// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bidforge Authors

#pragma once

#include "bidforge/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bidforge::cli {

/// 1 for I/O, backend and numerical failures, 2 for every other error.
int exit_code_for(Errc code) noexcept;

/// Runs the command line `args` (without the program name) in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bidforge::cli
