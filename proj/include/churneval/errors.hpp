#pragma once

#include <stdexcept>
#include <string>

namespace churneval {

enum class ErrorCode {
  MissingColumn,
  ParseError,
  DuplicateCustomerId,
  EmptyDataset,
  ScoreOutOfRange,
  KeyMismatch,
  LengthMismatch,
  EmptyInput,
  UnfittedCurve,
  ScoresRequired,
  SingleClass,
  UnavailableMetric,
  UnknownMetric,
  NoModels,
  InvalidConfig,
  IoError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateCustomerId: return "DuplicateCustomerId";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnfittedCurve: return "UnfittedCurve";
    case ErrorCode::ScoresRequired: return "ScoresRequired";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::UnavailableMetric: return "UnavailableMetric";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::NoModels: return "NoModels";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Input/validation errors map to CLI exit code 2, computation errors to 3.
inline bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn:
    case ErrorCode::ParseError:
    case ErrorCode::DuplicateCustomerId:
    case ErrorCode::EmptyDataset:
    case ErrorCode::ScoreOutOfRange:
    case ErrorCode::KeyMismatch:
    case ErrorCode::LengthMismatch:
    case ErrorCode::EmptyInput:
    case ErrorCode::NoModels:
    case ErrorCode::InvalidConfig:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        details_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code-name prefix, for re-annotation.
  const std::string& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::string details_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace churneval
