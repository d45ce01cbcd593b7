#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace gupmarket {

using complex = std::complex<double>;

enum class TimeUnit { trading_day, second };

// One trading session of the Shanghai/Shenzhen exchanges (09:30-11:30 and
// 13:00-15:00).
inline constexpr double kSecondsPerTradingDay = 4.0 * 3600.0;

// Seconds per unit of `unit`.
double seconds_per(TimeUnit unit);
std::string_view to_string(TimeUnit unit);
TimeUnit time_unit_from_string(std::string_view name);

inline constexpr std::size_t kDefaultBasisSize = 64;
inline constexpr double kFirstOrderValidityThreshold = 0.1;

// Parameters of the driven price-limited well, expressed in the return
// coordinate r = (price - mean)/mean with hbar = 1. Energies and frequencies
// are in inverse `time_unit`.
struct ModelParams {
  double m = 1.0;       // mass, time-unit per return^2
  double beta = 0.0;    // GUP parameter in return^2
  double d = 1.0;       // well width in return units
  double lambda = 0.0;  // information-field amplitude, energy per return
  double omega = 0.0;   // driving frequency
  std::size_t n_basis = kDefaultBasisSize;
  TimeUnit time_unit = TimeUnit::trading_day;

  bool operator==(const ModelParams&) const = default;
};

// Re-expresses the same physical model in another time unit. Mass scales
// with the unit, energies (lambda) and frequencies scale inversely; beta and
// d are unit-free.
ModelParams convert_time_unit(const ModelParams& p, TimeUnit target);

// Dimensionless first-order GUP correction at the highest retained level,
// beta * pi^2 * n_basis^2 / d^2.
double gup_correction_strength(const ModelParams& p);

// ModelParams that passed validation. Outside the default state, only
// validate_params constructs one.
class ValidatedParams {
 public:
  // Default ModelParams satisfy every invariant.
  ValidatedParams() = default;

  const ModelParams& params() const noexcept { return params_; }
  const ModelParams* operator->() const noexcept { return &params_; }
  bool first_order_warning() const noexcept { return first_order_warning_; }

  bool operator==(const ValidatedParams&) const = default;

 private:
  friend ValidatedParams validate_params(const ModelParams& p);
  ValidatedParams(ModelParams p, bool warn)
      : params_(p), first_order_warning_(warn) {}

  ModelParams params_;
  bool first_order_warning_ = false;
};

ValidatedParams validate_params(const ModelParams& p);
ValidatedParams validate_params(const ValidatedParams& p);

// Coefficients c_1..c_N stored zero-based: coeffs[0] is c_1.
struct WaveState {
  std::vector<complex> coeffs;
  double t = 0.0;

  double norm_squared() const;
};

WaveState ground_state(std::size_t n_basis);

}  // namespace gupmarket
