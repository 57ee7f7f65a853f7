#include "fixlab/error.hpp"

namespace fixlab {

const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NoEditSite: return "NoEditSite";
  case ErrorCode::CoverageGap: return "CoverageGap";
  case ErrorCode::ClassTooSmall: return "ClassTooSmall";
  case ErrorCode::FormatError: return "FormatError";
  case ErrorCode::EmptyTrainSplit: return "EmptyTrainSplit";
  case ErrorCode::MissingProvenance: return "MissingProvenance";
  case ErrorCode::TransportError: return "TransportError";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  case ErrorCode::NonFinite: return "NonFinite";
  case ErrorCode::GraphNotEvaluated: return "GraphNotEvaluated";
  case ErrorCode::UnsupervisedExample: return "UnsupervisedExample";
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::EmptySplit: return "EmptySplit";
  case ErrorCode::NoTraceOutputs: return "NoTraceOutputs";
  case ErrorCode::ContextMismatch: return "ContextMismatch";
  case ErrorCode::MalformedDiff: return "MalformedDiff";
  case ErrorCode::IoError: return "IoError";
  case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

} // namespace fixlab
