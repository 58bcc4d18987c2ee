#include "inscribed/error.hpp"

namespace inscribed {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::NotOrthotope: return "NotOrthotope";
    case ErrorKind::NotInscribed: return "NotInscribed";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::NotRowConstant: return "NotRowConstant";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::DegenerateVertex: return "DegenerateVertex";
    case ErrorKind::NotEigenvector: return "NotEigenvector";
    case ErrorKind::UnsupportedCase: return "UnsupportedCase";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace inscribed
