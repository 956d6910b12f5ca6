#ifndef SUBACT_ERROR_HPP
#define SUBACT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace subact {

enum class ErrorCode {
  RankDeficient,
  NotSymmetric,
  NoConvergence,
  ToleranceNotReached,
  DomainError,
  DimensionMismatch,
  NotAFrame,
  MixedDimensions,
  InvalidParameter,
  NotUnitVector,
  UnsupportedVariant,
  ConfigError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace subact

#endif  // SUBACT_ERROR_HPP
