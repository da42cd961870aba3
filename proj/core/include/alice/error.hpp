#pragma once

#include <stdexcept>
#include <string>

namespace alice {

/// Machine-parsable failure categories. The enumerator name doubles as the
/// error code printed by the CLI (`error: <code>: <detail>`).
enum class ErrorCode {
  ZeroVector,
  DimensionMismatch,
  EmptyInput,
  InvalidRange,
  BadTarget,
  EmptyBatch,
  ShapeMismatch,
  LambdaOutOfRange,
  InsufficientClasses,
  UnsupportedPayload,
  EmptyClass,
  NotEnoughSamples,
  DuplicateClass,
  EmptyStore,
  InfeasibleSpec,
  InsufficientShots,
  SplitMismatch,
  MissingClass,
  NoIncrementalClasses,
  TooFewSessions,
  UnknownLabel,
  ParseError,
  NonContiguousLabels,
  EmptyDataset,
  InvalidConfig,
  CheckpointMismatch,
  SchemaMismatch,
  IoError,
};

const char* code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace alice
