#pragma once

#include <stdexcept>
#include <string>

namespace ritz {

// Failure taxonomy shared by the whole library. Each code belongs to one of
// two families, which the command-line driver maps to distinct exit codes:
// usage/validation problems (bad inputs, unsupported request) exit 2, and
// numerical failures (inputs parsed fine but the computation cannot be
// completed reliably) exit 3.
enum class ErrorCode {
  // usage / validation
  OperatorOnly,            // operation needs an explicit matrix, got an operator handle
  DimensionTooLarge,       // dense path refused above the size cap
  DimensionMismatch,       // incompatible shapes or index sets
  ComplementMissing,       // operation needs the materialized complement block
  IndexOutOfRange,         // target index outside the Ritz block
  TooFewRitzPairs,         // estimated gaps need at least two Ritz values
  NonpositiveGap,          // gap or Gap input <= 0 where positivity is required
  NonpositivePairDistance, // per-pair distance <= 0 where positivity is required
  ParseError,              // malformed input file
  // numerical
  RankDeficient,           // basis candidate numerically rank-deficient
  QuadratureTooCoarse,     // quadrature cannot resolve the requested degrees
  RootBracketFailure,      // transcendental root not bracketed on a branch
  BreakdownUnrecoverable,  // iteration collapsed and restart recovery failed
};

class Error : public std::runtime_error {
 public:
  // `detail` carries the code-specific integer payload: the detected rank for
  // RankDeficient, the branch index for RootBracketFailure; -1 when unused.
  Error(ErrorCode code, const std::string& message, long detail = -1)
      : std::runtime_error(message), code_(code), detail_(detail) {}

  ErrorCode code() const { return code_; }
  long detail() const { return detail_; }

 private:
  ErrorCode code_;
  long detail_;
};

inline bool is_validation_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::OperatorOnly:
    case ErrorCode::DimensionTooLarge:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ComplementMissing:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::TooFewRitzPairs:
    case ErrorCode::NonpositiveGap:
    case ErrorCode::NonpositivePairDistance:
    case ErrorCode::ParseError:
      return true;
    default:
      return false;
  }
}

// Process exit code the command-line driver uses for a failure of this kind.
inline int exit_code_for(ErrorCode c) { return is_validation_error(c) ? 2 : 3; }

}  // namespace ritz
