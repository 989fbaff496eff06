#pragma once

#include <stdexcept>
#include <string>

namespace freqcurve {

// Error taxonomy. Categories map onto process exit codes in the CLI:
// validation -> 2, budget -> 3, internal -> 4.
enum class ErrorCode {
  OutOfDisc,
  TailTooLarge,
  ZeroFunction,
  RadiusExceeded,
  BoundaryZero,
  NoConvergence,
  RootPolishFailure,
  FactorMismatch,
  VanishingFactor,
  DepthExceeded,
  DegenerateSegment,
  RadiusTooSmall,
  NotInClass,
  CostGuard,
  CalibrationInconsistent,
  CenterInside,
  OutOfRange,
  BudgetExceeded,
  InsufficientGaps,
  DegeneratePiece,
  ZeroInput,
  ParseError,
};

enum class ErrorCategory { Validation, Budget, Internal };

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::BoundaryZero:
    case ErrorCode::NoConvergence:
    case ErrorCode::DepthExceeded:
    case ErrorCode::CostGuard:
    case ErrorCode::BudgetExceeded:
      return ErrorCategory::Budget;
    case ErrorCode::RootPolishFailure:
    case ErrorCode::FactorMismatch:
    case ErrorCode::CalibrationInconsistent:
      return ErrorCategory::Internal;
    default:
      return ErrorCategory::Validation;
  }
}

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return category_of(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace freqcurve
