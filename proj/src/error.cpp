#include "funreg/error.hpp"

namespace funreg {

std::string_view
to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::GridTooShort:
      return "GridTooShort";
    case ErrorCode::GridMismatch:
      return "GridMismatch";
    case ErrorCode::NonMonotoneGrid:
      return "NonMonotoneGrid";
    case ErrorCode::InvalidKernel:
      return "InvalidKernel";
    case ErrorCode::DomainError:
      return "DomainError";
    case ErrorCode::TooFewPoints:
      return "TooFewPoints";
    case ErrorCode::KernelNotH2Strict:
      return "KernelNotH2Strict";
    case ErrorCode::MissingSigma2:
      return "MissingSigma2";
    case ErrorCode::EmptyGrid:
      return "EmptyGrid";
    case ErrorCode::ParseError:
      return "ParseError";
    case ErrorCode::RaggedRows:
      return "RaggedRows";
    case ErrorCode::EmptyNeighborhood:
      return "EmptyNeighborhood";
    case ErrorCode::DegenerateBall:
      return "DegenerateBall";
    case ErrorCode::DegenerateConstants:
      return "DegenerateConstants";
    case ErrorCode::DegeneratePilot:
      return "DegeneratePilot";
  }
  return "Unknown";
}

bool
is_numeric_failure(ErrorCode code)
{
  switch (code) {
    case ErrorCode::EmptyNeighborhood:
    case ErrorCode::DegenerateBall:
    case ErrorCode::DegenerateConstants:
    case ErrorCode::DegeneratePilot:
      return true;
    default:
      return false;
  }
}

} // namespace funreg
