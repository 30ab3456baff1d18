#include "hyperzeta/error.hpp"

namespace hyperzeta {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kParamMismatch: return "ParamMismatch";
    case ErrorCode::kNotUnit: return "NotUnit";
    case ErrorCode::kNewtonNonconvergence: return "NewtonNonconvergence";
    case ErrorCode::kPrecisionRange: return "PrecisionRange";
    case ErrorCode::kNonUnitLeading: return "NonUnitLeading";
    case ErrorCode::kNotSquarefree: return "NotSquarefree";
    case ErrorCode::kNotMonic: return "NotMonic";
    case ErrorCode::kWrongDegree: return "WrongDegree";
    case ErrorCode::kEvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::kCurveMismatch: return "CurveMismatch";
    case ErrorCode::kGuardExhausted: return "GuardExhausted";
    case ErrorCode::kNotRational: return "NotRational";
    case ErrorCode::kLiftAmbiguous: return "LiftAmbiguous";
    case ErrorCode::kInconsistentResult: return "InconsistentResult";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace hyperzeta
