#include "hardyq/error.hpp"

namespace hardyq {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::StepUnderflow: return "step-size-underflow";
    case ErrorCode::SameClassification: return "same-classification-at-endpoints";
    case ErrorCode::NoGroundState: return "no-ground-state-detected";
    case ErrorCode::OutOfGrid: return "out-of-grid";
    case ErrorCode::InsufficientStencil: return "insufficient-stencil";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::DegenerateFit: return "degenerate-fit";
    case ErrorCode::ZeroDenominator: return "zero-denominator";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::SeriesMismatch: return "series-mismatch";
    case ErrorCode::NoValidDelta: return "no-valid-delta";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace hardyq
