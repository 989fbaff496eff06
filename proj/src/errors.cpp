#include "freqcurve/errors.hpp"

namespace freqcurve {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDisc: return "OutOfDisc";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::RadiusExceeded: return "RadiusExceeded";
    case ErrorCode::BoundaryZero: return "BoundaryZero";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RootPolishFailure: return "RootPolishFailure";
    case ErrorCode::FactorMismatch: return "FactorMismatch";
    case ErrorCode::VanishingFactor: return "VanishingFactor";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::NotInClass: return "NotInClass";
    case ErrorCode::CostGuard: return "CostGuard";
    case ErrorCode::CalibrationInconsistent: return "CalibrationInconsistent";
    case ErrorCode::CenterInside: return "CenterInside";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InsufficientGaps: return "InsufficientGaps";
    case ErrorCode::DegeneratePiece: return "DegeneratePiece";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace freqcurve
