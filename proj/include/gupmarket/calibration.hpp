#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "gupmarket/model.hpp"

namespace gupmarket {

inline constexpr double kTradingDaysPerYear = 252.0;

// How an annual volatility figure is written: 0.3 as a fraction, or 0.3 as
// a percentage (0.003).
enum class VolatilityReading { fraction, percent };

std::string_view to_string(VolatilityReading reading);
VolatilityReading volatility_reading_from_string(std::string_view name);

struct MarketInputs {
  double sigma_annual = 0.3;
  double mean_price = 10.0;
  double tick = 0.01;
  double limit_fraction = 0.10;
  VolatilityReading reading = VolatilityReading::fraction;

  bool operator==(const MarketInputs&) const = default;
};

struct MarketCalibration {
  MarketInputs inputs;
  double sigma_annual = 0.0;  // as a fraction, after applying `reading`
  double sigma_daily = 0.0;
  double m0 = 0.0;            // sigma_daily^-2
  double m = 0.0;             // model mass in the return coordinate
  double beta0 = 0.0;         // tick^2, price^2
  double beta = 0.0;          // beta0 / mean_price^2, return^2
  double d = 0.0;             // 2 * limit_fraction
  double min_price_uncertainty = 0.0;  // sqrt(beta0)
};

struct CalibrationResult {
  MarketCalibration market;
  ValidatedParams params;
};

double daily_volatility(double sigma_annual);
double mass_from_volatility(double sigma_daily);

// Runs the full chain. The returned parameters are in trading days with no
// drive (lambda = omega = 0).
CalibrationResult calibrate(const MarketInputs& inputs, std::size_t n_basis = kDefaultBasisSize);

// Recovers (sigma_annual as a fraction, tick, limit_fraction) from model
// parameters and a mean price. Requires trading-day units.
MarketInputs invert_calibration(const ModelParams& p, double mean_price);

// Sample standard deviation of log returns, annualised. A single return is
// its own absolute value.
double volatility_from_series(const std::vector<double>& closes, double periods_per_year);

struct PricePoint {
  std::string date;  // YYYY-MM-DD
  double close = 0.0;
};

// Reads a `date,close` CSV and returns the rows ordered by date. Malformed
// rows raise Parse errors that carry the 1-based line number.
std::vector<PricePoint> read_price_csv(std::istream& in);
std::vector<PricePoint> read_price_csv_file(const std::string& path);

}  // namespace gupmarket
