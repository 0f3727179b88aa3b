// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxup {

enum class ErrorCode {
    FileNotFound,
    IoError,
    ParseError,
    InvalidArgument,
    OutOfRange,
    SizeMismatch,
    ResolutionMismatch,
    AlignmentMismatch,
    ContainmentViolation,
    CoverageError,
};

/// Stable machine-readable name, e.g. "FILE_NOT_FOUND".
std::string_view errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), mCode(code) {}

    ErrorCode code() const noexcept { return mCode; }

private:
    ErrorCode mCode;
};

} // namespace voxup
