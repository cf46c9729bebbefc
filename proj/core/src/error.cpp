#include "gfm/error.hpp"

namespace gfm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidOperator: return "InvalidOperator";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::DimError: return "DimError";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::SymbolNotPositive: return "SymbolNotPositive";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::ConditionNotMet: return "ConditionNotMet";
    case ErrorKind::TheoremViolation: return "TheoremViolation";
    case ErrorKind::NotDualPair: return "NotDualPair";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::GenerationError: return "GenerationError";
  }
  return "Unknown";
}

}  // namespace gfm
