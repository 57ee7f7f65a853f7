#pragma once

#include <stdexcept>
#include <string>

namespace fixlab {

// Every recoverable failure in the library carries one of these codes so
// callers (and the CLI exit-code mapping) can dispatch without string
// matching.
enum class ErrorCode {
  NoEditSite,
  CoverageGap,
  ClassTooSmall,
  FormatError,
  EmptyTrainSplit,
  MissingProvenance,
  TransportError,
  ParseError,
  ShapeMismatch,
  NonFinite,
  GraphNotEvaluated,
  UnsupervisedExample,
  EmptyInput,
  EmptySplit,
  NoTraceOutputs,
  ContextMismatch,
  MalformedDiff,
  IoError,
  ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

} // namespace fixlab
