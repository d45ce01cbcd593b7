#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gupmarket {

enum class ErrorKind {
  NonPositive,
  NegativeBeta,
  NegativeValue,
  BasisTooSmall,
  LevelOutOfRange,
  OutOfWell,
  GridTooSmall,
  NonPositiveBeta0,
  NegativeVolatility,
  ZeroVolatility,
  SeriesTooShort,
  NonPositivePrice,
  InvalidArgument,
  QuadratureFailure,
  StepFailure,
  Parse,
  Usage,
};

// Coarse grouping used for process exit codes.
enum class ErrorCategory { Usage, Domain, Numerical };

std::string_view to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace gupmarket
