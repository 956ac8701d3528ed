// Copyright (c) 2026 pistetraj contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace piste {

// Every failure mode the library reports. The CLI maps each category to a
// distinct process exit code; see exit_code_for().
enum class ErrorCode {
  PointAtInfinity,
  SingularMatrix,
  DegenerateConfiguration,
  InsufficientData,
  NoConsensus,
  AllDegenerate,
  BorderViolation,
  DimensionMismatch,
  InvalidBox,
  LostTarget,
  ParseError,
  NonMonotonicFrames,
  LengthMismatch,
  ConfigError,
  EmptyDirectory,
  DecodeError,
  IoError,
};

const char* error_name(ErrorCode code);
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace piste
