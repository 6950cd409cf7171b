#include "quivercl/errors.hpp"

namespace quivercl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidQuiver: return "InvalidQuiver";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SingularGauge: return "SingularGauge";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::GradingViolation: return "GradingViolation";
    case ErrorCode::NotOnVariety: return "NotOnVariety";
    case ErrorCode::NonIntegerWeights: return "NonIntegerWeights";
    case ErrorCode::NotFixed: return "NotFixed";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::LeftBasin: return "LeftBasin";
    case ErrorCode::NotOnSlice: return "NotOnSlice";
    case ErrorCode::ZeroInvariant: return "ZeroInvariant";
    case ErrorCode::SamplingFailed: return "SamplingFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace quivercl
