// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/error.h>

namespace voxup {

std::string_view
errorCodeName(ErrorCode code) {
    switch (code) {
    case ErrorCode::FileNotFound: return "FILE_NOT_FOUND";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::SizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::ResolutionMismatch: return "RESOLUTION_MISMATCH";
    case ErrorCode::AlignmentMismatch: return "ALIGNMENT_MISMATCH";
    case ErrorCode::ContainmentViolation: return "CONTAINMENT_VIOLATION";
    case ErrorCode::CoverageError: return "COVERAGE_ERROR";
    }
    return "UNKNOWN";
}

} // namespace voxup
