#include "delone/error.hpp"

namespace delone {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::PointOutsideWindow: return "PointOutsideWindow";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::EmptyPatch: return "EmptyPatch";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::NonPrimitiveRule: return "NonPrimitiveRule";
    case ErrorCode::InfeasibleEnumeration: return "InfeasibleEnumeration";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::UnknownPatchClass: return "UnknownPatchClass";
    case ErrorCode::NoOccurrenceNearOrigin: return "NoOccurrenceNearOrigin";
    case ErrorCode::PeriodicInput: return "PeriodicInput";
    case ErrorCode::UnboundedCell: return "UnboundedCell";
    case ErrorCode::EmptySites: return "EmptySites";
    case ErrorCode::DegenerateDiameter: return "DegenerateDiameter";
    case ErrorCode::NoReturnVectorsFound: return "NoReturnVectorsFound";
    case ErrorCode::OutputNotDelone: return "OutputNotDelone";
    case ErrorCode::NoOccurrence: return "NoOccurrence";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace delone
