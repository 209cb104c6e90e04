#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scaleon {

enum class ErrorCode {
  InvalidScale,
  LabelMismatch,
  DivisionByZero,
  NotInBaseSet,
  NonConvergence,
  OutOfDomain,
  StepTooSmall,
  ConfigError,
  KindMismatch,
  ZeroField,
  WrongCausalKind,
  DomainExit,
  TooFewSamples,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the scenario runner in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace scaleon
