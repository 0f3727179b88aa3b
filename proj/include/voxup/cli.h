// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace voxup {

inline constexpr const char *kToolVersion = "1.0.0";

/// Entry point of the `voxup` binary. `args` excludes the program name.
/// Returns 0 on success; on failure prints {"error": {"code", "message"}} to
/// `err` and returns nonzero (2 for usage errors, 1 otherwise).
int runCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace voxup
