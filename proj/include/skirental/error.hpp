#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skirental {

enum class ErrorCode {
  kInvalidSpec,
  kZeroMass,
  kOutOfRange,
  kZeroSurvival,
  kMismatchedHorizon,
  kInvalidPerturbation,
  kInvalidParams,
  kInvalidLambda,
  kZeroPosterior,
  kDimensionMismatch,
  kEmptyBatch,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; the CLI maps kIo to
// exit status 1 and everything else to 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kZeroSurvival: return "ZeroSurvival";
    case ErrorCode::kMismatchedHorizon: return "MismatchedHorizon";
    case ErrorCode::kInvalidPerturbation: return "InvalidPerturbation";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidLambda: return "InvalidLambda";
    case ErrorCode::kZeroPosterior: return "ZeroPosterior";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace skirental
