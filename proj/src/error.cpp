#include "scaleon/error.hpp"

namespace scaleon {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotInBaseSet: return "NotInBaseSet";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::WrongCausalKind: return "WrongCausalKind";
    case ErrorCode::DomainExit: return "DomainExit";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace scaleon
