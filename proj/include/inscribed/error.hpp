#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inscribed {

enum class ErrorKind {
  DimensionMismatch,
  DimensionTooLarge,
  DimensionTooSmall,
  WrongDimension,
  NotSymmetric,
  NotPositiveDefinite,
  NotOrthogonal,
  NotUnit,
  NotOrthotope,
  NotInscribed,
  Degenerate,
  SingularGram,
  NonPositiveInput,
  ConstraintViolated,
  NotRowConstant,
  NotConverged,
  IndexError,
  NotOnBoundary,
  DegenerateVertex,
  NotEigenvector,
  UnsupportedCase,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace inscribed
