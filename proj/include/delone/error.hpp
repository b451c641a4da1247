#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace delone {

enum class ErrorCode {
  DuplicatePoints,
  PointOutsideWindow,
  UnsupportedDimension,
  WindowTooSmall,
  InsufficientWindow,
  EmptyPatch,
  SingularBasis,
  NonPrimitiveRule,
  InfeasibleEnumeration,
  EmptySet,
  UnknownPatchClass,
  NoOccurrenceNearOrigin,
  PeriodicInput,
  UnboundedCell,
  EmptySites,
  DegenerateDiameter,
  NoReturnVectorsFound,
  OutputNotDelone,
  NoOccurrence,
  FamilyMismatch,
  InvalidArgument,
  InputError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code mirrors the error names
/// used in reports and CLI output.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace delone
