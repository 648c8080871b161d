#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qprob {

enum class ErrorKind {
  DepthError,
  DomainError,
  SizeGuard,
  DimMismatch,
  NotHermitian,
  NotIdempotent,
  NotCommuting,
  ZeroVector,
  NotNormalized,
  NotAbsolutelyContinuous,
  NotUnitMeasure,
  NotDecomposition,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace qprob
