// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hedtts {

enum class ErrorCode {
  // corpus
  MissingAudio,
  BadSampleRate,
  DuplicateId,
  OverlappingIntervals,
  OrphanPhone,
  NonMonotonic,
  WordSpanMismatch,
  EmptyTrack,
  InsufficientData,
  // dsp
  TooShort,
  EmptySegment,
  // intensity
  NonFinite,
  EmptyCalibrationSet,
  DimensionMismatch,
  NoValidationData,
  DivergedLoss,
  EmptyTestSet,
  // hed
  AlignmentMismatch,
  MissingModel,
  IndexOutOfRange,
  InvalidValue,
  SchemaVersionMismatch,
  CorruptPayload,
  // tts
  UnknownSymbol,
  LengthMismatch,
  ModelNotLoaded,
  EmptyInput,
  // eval
  AllUnvoiced,
  ZeroVector,
  ConstantSeries,
  DegenerateFactor,
  SingleClass,
  // generic
  IoError,
  InvalidArgument,
  NotFound,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code so the
/// CLI and HTTP layers can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace hedtts
