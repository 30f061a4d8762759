#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace langspin {

enum class ErrorCode {
  DuplicateEdge,
  InvalidWeight,
  SelfLoop,
  UnknownLanguage,
  ArityMismatch,
  InvalidSpin,
  InvalidEnergy,
  InvalidArgument,
  TooLarge,
  FormatError,
  UnknownValue,
  UnknownScenario,
  InsufficientSamples,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidSpin: return "InvalidSpin";
    case ErrorCode::InvalidEnergy: return "InvalidEnergy";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::UnknownValue: return "UnknownValue";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// All library failures surface as this exception; `code()` identifies the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace langspin
