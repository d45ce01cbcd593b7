#include "gupmarket/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gupmarket/error.hpp"

namespace gupmarket {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::NegativeBeta: return "NegativeBeta";
    case ErrorKind::NegativeValue: return "NegativeValue";
    case ErrorKind::BasisTooSmall: return "BasisTooSmall";
    case ErrorKind::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorKind::OutOfWell: return "OutOfWell";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::NonPositiveBeta0: return "NonPositiveBeta0";
    case ErrorKind::NegativeVolatility: return "NegativeVolatility";
    case ErrorKind::ZeroVolatility: return "ZeroVolatility";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Usage:
      return ErrorCategory::Usage;
    case ErrorKind::QuadratureFailure:
    case ErrorKind::StepFailure:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Domain;
  }
}

double seconds_per(TimeUnit unit) {
  return unit == TimeUnit::second ? 1.0 : kSecondsPerTradingDay;
}

std::string_view to_string(TimeUnit unit) {
  return unit == TimeUnit::second ? "second" : "trading_day";
}

TimeUnit time_unit_from_string(std::string_view name) {
  if (name == "second" || name == "s") return TimeUnit::second;
  if (name == "trading_day" || name == "day") return TimeUnit::trading_day;
  throw Error(ErrorKind::Parse, "unknown time unit '" + std::string(name) + "'");
}

ModelParams convert_time_unit(const ModelParams& p, TimeUnit target) {
  if (p.time_unit == target) return p;
  // ratio = (source unit) / (target unit)
  const double ratio = seconds_per(p.time_unit) / seconds_per(target);
  ModelParams out = p;
  out.m = p.m * ratio;
  out.lambda = p.lambda / ratio;
  out.omega = p.omega / ratio;
  out.time_unit = target;
  return out;
}

double gup_correction_strength(const ModelParams& p) {
  const double n = static_cast<double>(p.n_basis);
  return p.beta * std::numbers::pi * std::numbers::pi * n * n / (p.d * p.d);
}

ValidatedParams validate_params(const ModelParams& p) {
  if (!(p.m > 0.0) || !std::isfinite(p.m))
    throw Error(ErrorKind::NonPositive, "m must be positive and finite");
  if (!(p.d > 0.0) || !std::isfinite(p.d))
    throw Error(ErrorKind::NonPositive, "d must be positive and finite");
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta))
    throw Error(ErrorKind::NegativeBeta, "beta must be non-negative");
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda))
    throw Error(ErrorKind::NegativeValue, "lambda must be non-negative");
  if (!(p.omega >= 0.0) || !std::isfinite(p.omega))
    throw Error(ErrorKind::NegativeValue, "omega must be non-negative");
  if (p.n_basis < 2)
    throw Error(ErrorKind::BasisTooSmall, "n_basis must be at least 2");
  return ValidatedParams(p, gup_correction_strength(p) > kFirstOrderValidityThreshold);
}

ValidatedParams validate_params(const ValidatedParams& p) { return p; }

double WaveState::norm_squared() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

WaveState ground_state(std::size_t n_basis) {
  if (n_basis < 2)
    throw Error(ErrorKind::BasisTooSmall, "n_basis must be at least 2");
  WaveState s;
  s.coeffs.assign(n_basis, complex{0.0, 0.0});
  s.coeffs[0] = 1.0;
  return s;
}

}  // namespace gupmarket
