#include "gupmarket/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "gupmarket/error.hpp"

namespace gupmarket {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

Error usage(const std::string& what) { return Error(ErrorKind::Usage, what); }

ValidatedParams resolve_params(const RunConfig& config) {
  return validate_params(convert_time_unit(config.params, config.unit));
}

json warnings_for(const ValidatedParams& p) {
  json w = json::array();
  if (p.first_order_warning())
    w.push_back("beta*pi^2*n_basis^2/d^2 = " + format_double(gup_correction_strength(p.params())) +
                " exceeds " + format_double(kFirstOrderValidityThreshold) +
                "; first-order GUP treatment is questionable for the highest levels");
  return w;
}

json base_summary(std::string_view command, const RunConfig& config, const ValidatedParams& p) {
  return json{{"command", std::string(command)},
              {"version", std::string(library_version())},
              {"config", config},
              {"resolved_params", p.params()},
              {"warnings", warnings_for(p)}};
}

fs::path prepare_out_dir(const RunConfig& config) {
  fs::path dir(config.out_dir.empty() ? "." : config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw usage("cannot create output directory '" + dir.string() + "'");
  return dir;
}

template <typename Writer>
fs::path write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw usage("cannot write '" + path.string() + "'");
  writer(out);
  if (!out) throw usage("write to '" + path.string() + "' failed");
  return path;
}

void finish(CommandOutput& output, const fs::path& dir, std::string_view command) {
  output.files.push_back(write_file(dir / (std::string(command) + "_summary.json"),
                                    [&](std::ostream& os) { os << output.summary.dump(2) << '\n'; }));
}

}  // namespace

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage: return 2;
    case ErrorCategory::Domain: return 3;
    case ErrorCategory::Numerical: return 4;
  }
  return 1;
}

CommandOutput cmd_spectrum(const RunConfig& config) {
  const ValidatedParams p = resolve_params(config);
  const fs::path dir = prepare_out_dir(config);
  const Spectrum s = spectrum_table(p);

  CommandOutput output;
  output.files.push_back(write_file(dir / "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, s); }));
  output.files.push_back(
      write_file(dir / "dipole.csv", [&](std::ostream& os) { write_dipole_csv(os, dipole_matrix(p)); }));

  double max_ratio = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) max_ratio = std::max(max_ratio, s.e1[i] / s.e0[i]);
  output.summary = base_summary("spectrum", config, p);
  output.summary["levels"] = s.size();
  output.summary["ground_energy"] = s.energy(1);
  output.summary["omega_2"] = s.omega(2);
  output.summary["omega0_2"] = s.omega0(2);
  output.summary["max_relative_gup_correction"] = max_ratio;
  finish(output, dir, "spectrum");
  return output;
}

CommandOutput cmd_scan(const RunConfig& config) {
  if (config.scan.steps < 3) throw usage("scan.steps must be at least 3");
  if (config.scan.time_samples < 2) throw usage("scan.time_samples must be at least 2");
  const ValidatedParams p = resolve_params(config);
  const fs::path dir = prepare_out_dir(config);

  const double w2 = characteristic_frequency(2, p);
  ScanOptions options;
  options.omega_min = config.scan.omega_min > 0.0 ? config.scan.omega_min : 0.9 * w2;
  options.omega_max = config.scan.omega_max > 0.0 ? config.scan.omega_max : 1.1 * w2;
  if (!(options.omega_max > options.omega_min)) throw usage("scan.omega_max must exceed scan.omega_min");
  options.steps = config.scan.steps;
  options.t_horizon = config.scan.t_horizon > 0.0 ? config.scan.t_horizon : 20.0 * 2.0 * kPi / w2;
  options.time_samples = config.scan.time_samples;
  options.exact = config.exact;

  const ResonanceScanResult scan = resonance_scan(p, options);

  CommandOutput output;
  output.files.push_back(write_file(dir / "scan.csv", [&](std::ostream& os) { write_scan_csv(os, scan); }));

  json peaks = json::array();
  for (const auto& peak : scan.located_peaks) {
    peaks.push_back({{"n", peak.n},
                     {"omega_grid", peak.omega_grid},
                     {"omega_refined", peak.omega_refined},
                     {"reference", peak.reference},
                     {"continuum_reference", continuum_frequency(peak.n, p)},
                     {"offset_in_steps", (peak.omega_grid - peak.reference) / scan.grid_step},
                     {"within_one_step", std::abs(peak.omega_grid - peak.reference) <= scan.grid_step},
                     {"peak_prob", peak.peak_prob}});
  }
  output.summary = base_summary("scan", config, p);
  output.summary["omega_min"] = options.omega_min;
  output.summary["omega_max"] = options.omega_max;
  output.summary["grid_step"] = scan.grid_step;
  output.summary["t_horizon"] = options.t_horizon;
  output.summary["method"] = options.exact ? "numerical" : "perturbative_first_order";
  output.summary["peaks"] = peaks;
  output.summary["predicted_gup_shift_2"] = w2 - continuum_frequency(2, p);
  if (p->lambda == 0.0) output.summary["warnings"].push_back("lambda is zero; no transitions are driven");
  finish(output, dir, "scan");
  return output;
}

CommandOutput cmd_propagate(const RunConfig& config) {
  const auto& pc = config.propagate;
  if (pc.samples < 2) throw usage("propagate.samples must be at least 2");
  if (pc.r_points == 1) throw usage("propagate.r_points must be 0 or at least 2");
  const ValidatedParams p = resolve_params(config);
  const fs::path dir = prepare_out_dir(config);

  const double half = 0.5 * p->d;
  const double a = pc.interval_a.value_or(-half);
  const double b = pc.interval_b.value_or(half);
  const double t_final = pc.t_final > 0.0 ? pc.t_final : 5.0 * 2.0 * kPi / characteristic_frequency(2, p);

  const AmplitudeTrajectory traj = propagate(p, t_final, Sampling{pc.samples});
  const auto norms = total_norm(traj);
  const auto excited = excited_probability(traj);
  const auto interval = interval_probability(traj, a, b);

  CommandOutput output;
  output.files.push_back(
      write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); }));
  output.files.push_back(write_file(dir / "observables.csv", [&](std::ostream& os) {
    os << "t,norm,excited,interval_probability\n";
    for (std::size_t i = 0; i < traj.samples(); ++i)
      os << format_double(traj.times[i]) << ',' << format_double(norms[i]) << ','
         << format_double(excited[i]) << ',' << format_double(interval[i]) << '\n';
  }));

  output.summary = base_summary("propagate", config, p);
  output.summary["t_final"] = t_final;
  output.summary["max_norm_drift"] = traj.max_norm_drift;
  output.summary["accepted_steps"] = traj.accepted_steps;
  output.summary["rejected_steps"] = traj.rejected_steps;
  output.summary["max_excited_probability"] = *std::max_element(excited.begin(), excited.end());
  output.summary["interval"] = {a, b};
  output.summary["interval_probability_min"] = *std::min_element(interval.begin(), interval.end());
  output.summary["interval_probability_max"] = *std::max_element(interval.begin(), interval.end());

  if (pc.r_points >= 2) {
    std::vector<double> r(pc.r_points);
    for (std::size_t j = 0; j < r.size(); ++j)
      r[j] = -half + p->d * static_cast<double>(j) / static_cast<double>(r.size() - 1);
    r.back() = half;
    const DensityTable table = density_evolution(traj, r);
    output.files.push_back(
        write_file(dir / "density.csv", [&](std::ostream& os) { write_density_csv(os, table); }));

    double drift = 0.0, slice_error = 0.0;
    for (Eigen::Index s = 0; s < table.density.rows(); ++s) {
      double l1 = 0.0;
      for (Eigen::Index j = 1; j < table.density.cols(); ++j) {
        const double left = std::abs(table.density(s, j - 1) - table.density(0, j - 1));
        const double right = std::abs(table.density(s, j) - table.density(0, j));
        l1 += 0.5 * (left + right) * (r[static_cast<std::size_t>(j)] - r[static_cast<std::size_t>(j - 1)]);
      }
      drift = std::max(drift, l1);
      slice_error = std::max(slice_error, std::abs(table.slice_integrals[static_cast<std::size_t>(s)] - 1.0));
    }
    output.summary["density_shape_drift_l1"] = drift;
    output.summary["density_slice_integral_max_error"] = slice_error;
  }
  finish(output, dir, "propagate");
  return output;
}

CommandOutput cmd_calibrate(const RunConfig& config) {
  const fs::path dir = prepare_out_dir(config);
  MarketInputs inputs = config.calibrate.market;
  json series = nullptr;
  if (config.calibrate.series_csv) {
    const auto rows = read_price_csv_file(*config.calibrate.series_csv);
    std::vector<double> closes;
    closes.reserve(rows.size());
    for (const auto& row : rows) closes.push_back(row.close);
    inputs.sigma_annual = volatility_from_series(closes, config.calibrate.periods_per_year);
    inputs.reading = VolatilityReading::fraction;
    series = {{"path", *config.calibrate.series_csv},
              {"points", rows.size()},
              {"first_date", rows.empty() ? "" : rows.front().date},
              {"last_date", rows.empty() ? "" : rows.back().date},
              {"periods_per_year", config.calibrate.periods_per_year},
              {"sigma_annual", inputs.sigma_annual}};
  }

  const CalibrationResult result = calibrate(inputs, config.params.n_basis);
  const ValidatedParams& p = result.params;

  RunConfig emitted = config;
  emitted.params = p.params();
  emitted.calibrate.market = inputs;
  emitted.calibrate.series_csv.reset();

  // Reference figures against the formulas evaluated on the calibrated model.
  const double prefactor_day = kPi * kPi / (2.0 * p->m * p->d * p->d);
  const double prefactor_second = prefactor_day / kSecondsPerTradingDay;
  const double threshold_minutes = 2.0 * kPi / prefactor_second / 60.0;
  const json reference = {
      {"quoted_omega0_prefactor_per_second", kQuotedOmegaPrefactorPerSecond},
      {"computed_omega0_prefactor_per_trading_day", prefactor_day},
      {"computed_omega0_prefactor_per_second", prefactor_second},
      {"seconds_per_trading_day", kSecondsPerTradingDay},
      {"quoted_over_computed", kQuotedOmegaPrefactorPerSecond / prefactor_second},
      {"quoted_cycle_threshold_minutes", kQuotedCycleThresholdMinutes},
      {"computed_cycle_threshold_minutes", threshold_minutes},
      {"note",
       "omega_n^0 = pi^2 (n^2-1) / (2 m d^2) evaluated with the calibrated m and d does not "
       "reproduce the quoted 4e-3 (n^2-1) s^-1 under any single trading-day-to-second "
       "conversion; the quoted figure and the 25-minute threshold are reported for reference only"}};

  CommandOutput output;
  output.summary = {{"command", "calibrate"},
                    {"version", std::string(library_version())},
                    {"config", config},
                    {"series", series},
                    {"calibration", result.market},
                    {"params", p.params()},
                    {"params_in_unit", convert_time_unit(p.params(), config.unit)},
                    {"warnings", warnings_for(p)},
                    {"emitted_config", emitted},
                    {"reference", reference}};
  output.files.push_back(write_file(dir / "calibration.json", [&](std::ostream& os) {
    os << output.summary.dump(2) << '\n';
  }));
  return output;
}

}  // namespace gupmarket
