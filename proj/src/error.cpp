#include "qprob/error.hpp"

namespace qprob {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DepthError: return "DepthError";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SizeGuard: return "SizeGuard";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
    case ErrorKind::NotUnitMeasure: return "NotUnitMeasure";
    case ErrorKind::NotDecomposition: return "NotDecomposition";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace qprob
