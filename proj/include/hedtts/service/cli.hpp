// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace hedtts::service {

/// Entry point of the `hedtts` command line. Returns the process exit code:
/// 0 on success, 1 on a runtime error (error JSON on `err`), 2 on a usage
/// error (message and usage text on `err`).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hedtts::service
