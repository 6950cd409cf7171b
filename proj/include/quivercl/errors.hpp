#pragma once

#include <stdexcept>
#include <string>

namespace quivercl {

enum class ErrorCode {
  InvalidQuiver,
  ShapeMismatch,
  SingularGauge,
  NotInjective,
  MaxIterations,
  GradingViolation,
  NotOnVariety,
  NonIntegerWeights,
  NotFixed,
  NoConvergence,
  DimensionMismatch,
  IllConditioned,
  LeftBasin,
  NotOnSlice,
  ZeroInvariant,
  SamplingFailed,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can report it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace quivercl
