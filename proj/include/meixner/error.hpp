#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meixner {

enum class ErrorCode {
  InvalidDimension,
  NonPositiveBeta,
  NonPositiveC,
  CMassNotBelowOne,
  DegenerateParameters,
  NotDegenerate,
  ConstraintViolation,
  DegreeCapExceeded,
  TruncationBoundary,
  SingularGenfun,
  TailTooLarge,
  NegativeTime,
  InvalidIndex,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. The message names the
/// violated bound or the failing input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace meixner
