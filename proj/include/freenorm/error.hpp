#pragma once

#include <stdexcept>
#include <string>

namespace freenorm {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotClosed,
  MatchLengthMismatch,
  WordTooLong,
  NotAdequate,
  NonPiecewiseLinear,
  OutOfRange,
  NotExpanding,
  NotClosedUnderInverse,
  InvalidGroup,
  IterationCap,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace freenorm
