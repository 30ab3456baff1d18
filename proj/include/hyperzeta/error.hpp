#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperzeta {

enum class ErrorCode {
  kInvalidParams,
  kParamMismatch,
  kNotUnit,
  kNewtonNonconvergence,
  kPrecisionRange,
  kNonUnitLeading,
  kNotSquarefree,
  kNotMonic,
  kWrongDegree,
  kEvenCharacteristic,
  kCurveMismatch,
  kGuardExhausted,
  kNotRational,
  kLiftAmbiguous,
  kInconsistentResult,
  kBudgetExceeded,
  kParseError,
};

std::string_view error_name(ErrorCode code);

/// Every failure raised by the library. The message names the violated
/// contract; `code()` is stable and drives CLI exit statuses.
class ZetaError : public std::runtime_error {
 public:
  ZetaError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperzeta
