#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agt {

enum class ErrorKind {
  InvalidArgument,
  RankUnsupported,
  DisjointnessViolation,
  InclusionFailure,
  OrderTooSmall,
  MemoryBudgetExceeded,
  SizeLimit,
  NotGenerating,
  ConvergenceFailure,
  NotPrime,
  DivisionByZero,
  PrimeMismatch,
  PrecisionExhausted,
  SingularBasis,
  DeterminantNotOne,
  NumericalFailure,
  NotDiverging,
  CertFailure,
  SearchExhausted,
  PipelineStuck,
  NormsTooLarge,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto a stable name and exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace agt
