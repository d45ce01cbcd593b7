#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "gupmarket/calibration.hpp"
#include "gupmarket/dynamics.hpp"
#include "gupmarket/model.hpp"
#include "gupmarket/operators.hpp"
#include "gupmarket/spectrum.hpp"

namespace gupmarket {

std::string_view library_version();

// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

// Zero-valued omega bounds and horizon mean "derive from the spectrum".
struct ScanConfig {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t steps = 201;
  double t_horizon = 0.0;
  std::size_t time_samples = 512;

  bool operator==(const ScanConfig&) const = default;
};

struct PropagateConfig {
  double t_final = 0.0;  // zero: five periods of omega_2
  std::size_t samples = 101;
  std::size_t r_points = 0;  // zero: no density table
  std::optional<double> interval_a;
  std::optional<double> interval_b;

  bool operator==(const PropagateConfig&) const = default;
};

struct CalibrateConfig {
  MarketInputs market;
  std::optional<std::string> series_csv;
  double periods_per_year = kTradingDaysPerYear;

  bool operator==(const CalibrateConfig&) const = default;
};

// Everything one CLI invocation needs. `params` carry their own time unit;
// they are converted to `unit` before running, and scan/propagation controls
// as well as all outputs are expressed in `unit`.
struct RunConfig {
  ModelParams params;
  ScanConfig scan;
  PropagateConfig propagate;
  CalibrateConfig calibrate;
  std::string out_dir = ".";
  bool exact = false;
  TimeUnit unit = TimeUnit::trading_day;

  bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const MarketInputs& m);
void from_json(const nlohmann::json& j, MarketInputs& m);
void to_json(nlohmann::json& j, const MarketCalibration& c);
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Parse failures surface as Error(ErrorKind::Parse).
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string dump_run_config(const RunConfig& config);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);
// First line "# dim=N,d=D", then a header row and one line per matrix row.
void write_dipole_csv(std::ostream& out, const DipoleMatrix& m);
void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& traj);
void write_scan_csv(std::ostream& out, const ResonanceScanResult& scan);
void write_density_csv(std::ostream& out, const DensityTable& table);
void write_series_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<double>& values, std::string_view column);

}  // namespace gupmarket
