#pragma once

#include <stdexcept>
#include <string>

namespace hardyq {

enum class ErrorCode {
  InvalidParams,
  NoConvergence,
  DomainError,
  StepUnderflow,
  SameClassification,
  NoGroundState,
  OutOfGrid,
  InsufficientStencil,
  Pole,
  DegenerateFit,
  ZeroDenominator,
  GridMismatch,
  SeriesMismatch,
  NoValidDelta,
  Overflow,
  Io,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; the C API maps `code()`
// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hardyq
