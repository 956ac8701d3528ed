// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#include "piste/errors.hpp"

namespace piste {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoConsensus: return "NoConsensus";
    case ErrorCode::AllDegenerate: return "AllDegenerate";
    case ErrorCode::BorderViolation: return "BorderViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::LostTarget: return "LostTarget";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonMonotonicFrames: return "NonMonotonicFrames";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::EmptyDirectory: return "EmptyDirectory";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

int exit_code_for(ErrorCode code) {
  // 10 + enum index keeps categories distinct and clear of the shell's
  // reserved low codes.
  return 10 + static_cast<int>(code);
}

}  // namespace piste
