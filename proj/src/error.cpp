#include "agt/error.hpp"

namespace agt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RankUnsupported: return "RankUnsupported";
    case ErrorKind::DisjointnessViolation: return "DisjointnessViolation";
    case ErrorKind::InclusionFailure: return "InclusionFailure";
    case ErrorKind::OrderTooSmall: return "OrderTooSmall";
    case ErrorKind::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::NotGenerating: return "NotGenerating";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PrimeMismatch: return "PrimeMismatch";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::DeterminantNotOne: return "DeterminantNotOne";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::NotDiverging: return "NotDiverging";
    case ErrorKind::CertFailure: return "CertFailure";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::PipelineStuck: return "PipelineStuck";
    case ErrorKind::NormsTooLarge: return "NormsTooLarge";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace agt
