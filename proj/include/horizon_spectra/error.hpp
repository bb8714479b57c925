#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace horizon_spectra {

enum class ErrorCode {
  kInvalidParameters,
  kNotAdmissible,
  kChargeTooLarge,
  kNotAHorizon,
  kNotAPositiveRoot,
  kBadMetric,
  kNoConvergence,
  kContinuationLost,
  kModeCapExceeded,
  kBadConfig,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameters: return "InvalidParameters";
    case ErrorCode::kNotAdmissible: return "NotAdmissible";
    case ErrorCode::kChargeTooLarge: return "ChargeTooLarge";
    case ErrorCode::kNotAHorizon: return "NotAHorizon";
    case ErrorCode::kNotAPositiveRoot: return "NotAPositiveRoot";
    case ErrorCode::kBadMetric: return "BadMetric";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kContinuationLost: return "ContinuationLost";
    case ErrorCode::kModeCapExceeded: return "ModeCapExceeded";
    case ErrorCode::kBadConfig: return "BadConfig";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace horizon_spectra
