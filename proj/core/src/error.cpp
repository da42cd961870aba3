#include "alice/error.hpp"

namespace alice {

const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::BadTarget: return "BadTarget";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::InsufficientClasses: return "InsufficientClasses";
    case ErrorCode::UnsupportedPayload: return "UnsupportedPayload";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NotEnoughSamples: return "NotEnoughSamples";
    case ErrorCode::DuplicateClass: return "DuplicateClass";
    case ErrorCode::EmptyStore: return "EmptyStore";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::InsufficientShots: return "InsufficientShots";
    case ErrorCode::SplitMismatch: return "SplitMismatch";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::NoIncrementalClasses: return "NoIncrementalClasses";
    case ErrorCode::TooFewSessions: return "TooFewSessions";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonContiguousLabels: return "NonContiguousLabels";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::CheckpointMismatch: return "CheckpointMismatch";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace alice
