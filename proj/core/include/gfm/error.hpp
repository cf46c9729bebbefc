#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gfm {

enum class ErrorKind {
  InvalidOperator,
  NotHermitian,
  SingularOperator,
  DimError,
  NotAFrame,
  SymbolNotPositive,
  NotContractive,
  ConditionNotMet,
  TheoremViolation,
  NotDualPair,
  FormatError,
  ValidationError,
  GenerationError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gfm
