// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/error.hpp"

namespace hedtts {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingAudio: return "MissingAudio";
    case ErrorCode::BadSampleRate: return "BadSampleRate";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::OverlappingIntervals: return "OverlappingIntervals";
    case ErrorCode::OrphanPhone: return "OrphanPhone";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::WordSpanMismatch: return "WordSpanMismatch";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyCalibrationSet: return "EmptyCalibrationSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoValidationData: return "NoValidationData";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::MissingModel: return "MissingModel";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::CorruptPayload: return "CorruptPayload";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ModelNotLoaded: return "ModelNotLoaded";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AllUnvoiced: return "AllUnvoiced";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::DegenerateFactor: return "DegenerateFactor";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace hedtts
