#pragma once

#include <stdexcept>
#include <string>

namespace weyl {

enum class ErrorCode {
  PoleEvaluation,
  DomainError,
  ValidationError,
  ParseError,
  IOError,
  DegenerateDerivative,
  GridTooCoarse,
  BlowUp,
  WindowOnPole,
  QuadratureFailure,
  InsufficientRange,
  ConstructionMismatch,
  DegenerateNorm,
  NotAnEigenvalue,
  InsufficientWindow,
  NonDecaying,
  Underflow,
  DuplicateEigenvalue,
  IndexBeyondCap,
  NoConvergence,
  SpectralPoint,
  ScanResolution,
  WronskianSignError,
  VerificationFailure,
};

const char* to_string(ErrorCode code);

// Input problems (bad specs, bad arguments) as opposed to numerical failures.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace weyl
