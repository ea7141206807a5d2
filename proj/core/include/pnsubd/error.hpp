#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pnsubd {

enum class ErrorCode {
  InvalidArgument,
  TooFewPoints,
  NotDivisible,
  DegenerateAverage,
  ParseError,
  IndexOutOfRange,
  NonManifold,
  TopologyMismatch,
  UnknownScheme,
  WrongFaceArity,
  UnsupportedVariant,
  UnsupportedScheme,
  LayoutMismatch,
  NotDiagonalizable,
  ComplexClampFailure,
  DegenerateTangents,
  FitDiverged,
  NonPositiveEntry,
  Io,
};

/// Coarse error classes; the CLI maps them onto exit codes 2/3/4.
enum class ErrorCategory { Input, Scheme, Numeric };

std::string_view to_string(ErrorCode code);
ErrorCategory category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pnsubd
