#include "freenorm/error.hpp"

namespace freenorm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::MatchLengthMismatch: return "MatchLengthMismatch";
    case ErrorCode::WordTooLong: return "WordTooLong";
    case ErrorCode::NotAdequate: return "NotAdequate";
    case ErrorCode::NonPiecewiseLinear: return "NonPiecewiseLinear";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotExpanding: return "NotExpanding";
    case ErrorCode::NotClosedUnderInverse: return "NotClosedUnderInverse";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::IterationCap: return "IterationCap";
  }
  return "Unknown";
}

}  // namespace freenorm
