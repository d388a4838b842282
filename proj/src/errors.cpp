#include "weyl/errors.hpp"

namespace weyl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::DegenerateDerivative: return "DegenerateDerivative";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::WindowOnPole: return "WindowOnPole";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InsufficientRange: return "InsufficientRange";
    case ErrorCode::ConstructionMismatch: return "ConstructionMismatch";
    case ErrorCode::DegenerateNorm: return "DegenerateNorm";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::NonDecaying: return "NonDecaying";
    case ErrorCode::Underflow: return "Underflow";
    case ErrorCode::DuplicateEigenvalue: return "DuplicateEigenvalue";
    case ErrorCode::IndexBeyondCap: return "IndexBeyondCap";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SpectralPoint: return "SpectralPoint";
    case ErrorCode::ScanResolution: return "ScanResolution";
    case ErrorCode::WronskianSignError: return "WronskianSignError";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  return code == ErrorCode::ValidationError || code == ErrorCode::ParseError ||
         code == ErrorCode::DomainError || code == ErrorCode::IndexBeyondCap ||
         code == ErrorCode::DuplicateEigenvalue;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace weyl
