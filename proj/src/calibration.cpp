#include "gupmarket/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "gupmarket/error.hpp"

namespace gupmarket {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (s[i] < '0' || s[i] > '9') return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace

std::string_view to_string(VolatilityReading reading) {
  return reading == VolatilityReading::percent ? "percent" : "fraction";
}

VolatilityReading volatility_reading_from_string(std::string_view name) {
  if (name == "fraction") return VolatilityReading::fraction;
  if (name == "percent") return VolatilityReading::percent;
  throw Error(ErrorKind::Parse, "unknown volatility reading '" + std::string(name) + "'");
}

double daily_volatility(double sigma_annual) {
  if (sigma_annual < 0.0 || std::isnan(sigma_annual))
    throw Error(ErrorKind::NegativeVolatility, "annual volatility must be non-negative");
  return sigma_annual / std::sqrt(kTradingDaysPerYear);
}

double mass_from_volatility(double sigma_daily) {
  if (sigma_daily < 0.0 || std::isnan(sigma_daily))
    throw Error(ErrorKind::NegativeVolatility, "daily volatility must be non-negative");
  if (sigma_daily == 0.0)
    throw Error(ErrorKind::ZeroVolatility, "zero volatility gives an infinite mass");
  return 1.0 / (sigma_daily * sigma_daily);
}

CalibrationResult calibrate(const MarketInputs& inputs, std::size_t n_basis) {
  if (!(inputs.mean_price > 0.0))
    throw Error(ErrorKind::NonPositive, "mean_price must be positive");
  if (!(inputs.tick >= 0.0)) throw Error(ErrorKind::NegativeValue, "tick must be non-negative");
  if (!(inputs.limit_fraction > 0.0 && inputs.limit_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "limit_fraction must lie in (0, 1)");

  MarketCalibration c;
  c.inputs = inputs;
  c.sigma_annual = inputs.reading == VolatilityReading::percent ? inputs.sigma_annual / 100.0
                                                                : inputs.sigma_annual;
  c.sigma_daily = daily_volatility(c.sigma_annual);
  c.m0 = mass_from_volatility(c.sigma_daily);
  // sigma_daily is already a return volatility, so the mass needs no further
  // price rescaling.
  c.m = c.m0;
  c.beta0 = inputs.tick * inputs.tick;
  c.beta = c.beta0 / (inputs.mean_price * inputs.mean_price);
  c.d = 2.0 * inputs.limit_fraction;
  c.min_price_uncertainty = std::sqrt(c.beta0);

  ModelParams p;
  p.m = c.m;
  p.beta = c.beta;
  p.d = c.d;
  p.lambda = 0.0;
  p.omega = 0.0;
  p.n_basis = n_basis;
  p.time_unit = TimeUnit::trading_day;
  return {c, validate_params(p)};
}

MarketInputs invert_calibration(const ModelParams& p, double mean_price) {
  if (p.time_unit != TimeUnit::trading_day)
    throw Error(ErrorKind::InvalidArgument, "inversion expects trading-day parameters");
  MarketInputs out;
  out.sigma_annual = std::sqrt(kTradingDaysPerYear / p.m);
  out.mean_price = mean_price;
  out.tick = std::sqrt(p.beta) * mean_price;
  out.limit_fraction = 0.5 * p.d;
  out.reading = VolatilityReading::fraction;
  return out;
}

double volatility_from_series(const std::vector<double>& closes, double periods_per_year) {
  if (closes.size() < 2)
    throw Error(ErrorKind::SeriesTooShort, "need at least two prices");
  if (!(periods_per_year > 0.0))
    throw Error(ErrorKind::NonPositive, "periods_per_year must be positive");
  for (std::size_t i = 0; i < closes.size(); ++i)
    if (!(closes[i] > 0.0))
      throw Error(ErrorKind::NonPositivePrice,
                  "price at index " + std::to_string(i) + " is not positive");

  std::vector<double> returns(closes.size() - 1);
  for (std::size_t i = 1; i < closes.size(); ++i) returns[i - 1] = std::log(closes[i] / closes[i - 1]);

  if (returns.size() == 1) return std::abs(returns[0]) * std::sqrt(periods_per_year);

  const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) /
                      static_cast<double>(returns.size());
  double ss = 0.0;
  for (double r : returns) ss += (r - mean) * (r - mean);
  return std::sqrt(ss / static_cast<double>(returns.size() - 1)) * std::sqrt(periods_per_year);
}

std::vector<PricePoint> read_price_csv(std::istream& in) {
  std::vector<PricePoint> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "date,close") throw parse_error(line_no, "expected header 'date,close'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
      throw parse_error(line_no, "expected two fields");
    const auto date = trim(text.substr(0, comma));
    const auto close_text = trim(text.substr(comma + 1));
    if (!is_iso_date(date)) throw parse_error(line_no, "malformed date '" + std::string(date) + "'");
    double close = 0.0;
    const auto [ptr, ec] = std::from_chars(close_text.data(), close_text.data() + close_text.size(), close);
    if (ec != std::errc{} || ptr != close_text.data() + close_text.size() || !std::isfinite(close))
      throw parse_error(line_no, "malformed close '" + std::string(close_text) + "'");
    if (!(close > 0.0))
      throw Error(ErrorKind::NonPositivePrice,
                  "line " + std::to_string(line_no) + ": close must be positive");
    rows.push_back({std::string(date), close});
  }
  if (!header_seen) throw parse_error(line_no, "missing header 'date,close'");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].date == rows[i - 1].date)
      throw Error(ErrorKind::Parse, "duplicate date " + rows[i].date);
  return rows;
}

std::vector<PricePoint> read_price_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open '" + path + "'");
  return read_price_csv(in);
}

}  // namespace gupmarket
