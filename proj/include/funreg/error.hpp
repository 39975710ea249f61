#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace funreg {

enum class ErrorCode
{
  // input validation
  InvalidArgument,
  GridTooShort,
  GridMismatch,
  NonMonotoneGrid,
  InvalidKernel,
  DomainError,
  TooFewPoints,
  KernelNotH2Strict,
  MissingSigma2,
  EmptyGrid,
  ParseError,
  RaggedRows,
  // numerical failures
  EmptyNeighborhood,
  DegenerateBall,
  DegenerateConstants,
  DegeneratePilot,
};

std::string_view to_string(ErrorCode code);

//! True for error codes that describe a numerical failure on otherwise
//! valid input (the CLI maps these to exit code 3, the rest to 2).
bool is_numeric_failure(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace funreg
