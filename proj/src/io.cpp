#include "gupmarket/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gupmarket/error.hpp"

namespace gupmarket {

using nlohmann::json;

std::string_view library_version() { return GUPMARKET_VERSION; }

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error(ErrorKind::InvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

void to_json(json& j, const ModelParams& p) {
  j = json{{"m", p.m},           {"beta", p.beta},       {"d", p.d},
           {"lambda", p.lambda}, {"omega", p.omega},     {"n_basis", p.n_basis},
           {"time_unit", std::string(to_string(p.time_unit))}};
}

void from_json(const json& j, ModelParams& p) {
  ModelParams out;
  out.m = j.value("m", out.m);
  out.beta = j.value("beta", out.beta);
  out.d = j.value("d", out.d);
  out.lambda = j.value("lambda", out.lambda);
  out.omega = j.value("omega", out.omega);
  out.n_basis = j.value("n_basis", out.n_basis);
  if (j.contains("time_unit")) out.time_unit = time_unit_from_string(j.at("time_unit").get<std::string>());
  p = out;
}

void to_json(json& j, const MarketInputs& m) {
  j = json{{"sigma_annual", m.sigma_annual},
           {"mean_price", m.mean_price},
           {"tick", m.tick},
           {"limit_fraction", m.limit_fraction},
           {"sigma_reading", std::string(to_string(m.reading))}};
}

void from_json(const json& j, MarketInputs& m) {
  MarketInputs out;
  out.sigma_annual = j.value("sigma_annual", out.sigma_annual);
  out.mean_price = j.value("mean_price", out.mean_price);
  out.tick = j.value("tick", out.tick);
  out.limit_fraction = j.value("limit_fraction", out.limit_fraction);
  if (j.contains("sigma_reading"))
    out.reading = volatility_reading_from_string(j.at("sigma_reading").get<std::string>());
  m = out;
}

void to_json(json& j, const MarketCalibration& c) {
  j = json{{"inputs", c.inputs},
           {"sigma_annual", c.sigma_annual},
           {"sigma_daily", c.sigma_daily},
           {"m0", c.m0},
           {"m", c.m},
           {"beta0", c.beta0},
           {"beta", c.beta},
           {"d", c.d},
           {"min_price_uncertainty", c.min_price_uncertainty}};
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void to_json(json& j, const RunConfig& c) {
  j = json{
      {"params", c.params},
      {"scan",
       {{"omega_min", c.scan.omega_min},
        {"omega_max", c.scan.omega_max},
        {"steps", c.scan.steps},
        {"t_horizon", c.scan.t_horizon},
        {"time_samples", c.scan.time_samples}}},
      {"propagate",
       {{"t_final", c.propagate.t_final},
        {"samples", c.propagate.samples},
        {"r_points", c.propagate.r_points},
        {"interval_a", optional_number(c.propagate.interval_a)},
        {"interval_b", optional_number(c.propagate.interval_b)}}},
      {"calibrate",
       {{"market", c.calibrate.market},
        {"series_csv", c.calibrate.series_csv ? json(*c.calibrate.series_csv) : json(nullptr)},
        {"periods_per_year", c.calibrate.periods_per_year}}},
      {"out_dir", c.out_dir},
      {"exact", c.exact},
      {"unit", std::string(to_string(c.unit))},
  };
}

void from_json(const json& j, RunConfig& c) {
  RunConfig out;
  if (j.contains("params")) out.params = j.at("params").get<ModelParams>();
  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    out.scan.omega_min = s.value("omega_min", out.scan.omega_min);
    out.scan.omega_max = s.value("omega_max", out.scan.omega_max);
    out.scan.steps = s.value("steps", out.scan.steps);
    out.scan.t_horizon = s.value("t_horizon", out.scan.t_horizon);
    out.scan.time_samples = s.value("time_samples", out.scan.time_samples);
  }
  if (j.contains("propagate")) {
    const auto& s = j.at("propagate");
    out.propagate.t_final = s.value("t_final", out.propagate.t_final);
    out.propagate.samples = s.value("samples", out.propagate.samples);
    out.propagate.r_points = s.value("r_points", out.propagate.r_points);
    out.propagate.interval_a = read_optional_number(s, "interval_a");
    out.propagate.interval_b = read_optional_number(s, "interval_b");
  }
  if (j.contains("calibrate")) {
    const auto& s = j.at("calibrate");
    if (s.contains("market")) out.calibrate.market = s.at("market").get<MarketInputs>();
    if (s.contains("series_csv") && !s.at("series_csv").is_null())
      out.calibrate.series_csv = s.at("series_csv").get<std::string>();
    out.calibrate.periods_per_year = s.value("periods_per_year", out.calibrate.periods_per_year);
  }
  out.out_dir = j.value("out_dir", out.out_dir);
  out.exact = j.value("exact", out.exact);
  if (j.contains("unit")) out.unit = time_unit_from_string(j.at("unit").get<std::string>());
  c = out;
}

RunConfig parse_run_config(const std::string& text) {
  try {
    return json::parse(text).get<RunConfig>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& config) { return json(config).dump(2); }

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "n,e0,e1,E,omega0,omega\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    out << n << ',' << format_double(s.e0[i]) << ',' << format_double(s.e1[i]) << ','
        << format_double(s.energies[i]) << ',' << format_double(s.omega0(n)) << ','
        << format_double(s.omega(n)) << '\n';
  }
}

void write_dipole_csv(std::ostream& out, const DipoleMatrix& m) {
  out << "# dim=" << m.dim << ",d=" << format_double(m.d) << '\n';
  out << 'n';
  for (std::size_t k = 1; k <= m.dim; ++k) out << ',' << k;
  out << '\n';
  for (std::size_t i = 0; i < m.dim; ++i) {
    out << i + 1;
    for (std::size_t k = 0; k < m.dim; ++k)
      out << ',' << format_double(m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const AmplitudeTrajectory& traj) {
  out << "t,n,re,im\n";
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    const std::string t = format_double(traj.times[s]);
    for (Eigen::Index i = 0; i < traj.coeffs.cols(); ++i) {
      const complex c = traj.coeffs(static_cast<Eigen::Index>(s), i);
      out << t << ',' << i + 1 << ',' << format_double(c.real()) << ',' << format_double(c.imag())
          << '\n';
    }
  }
}

void write_scan_csv(std::ostream& out, const ResonanceScanResult& scan) {
  out << "omega,peak_prob\n";
  for (std::size_t i = 0; i < scan.omegas.size(); ++i)
    out << format_double(scan.omegas[i]) << ',' << format_double(scan.peak_prob[i]) << '\n';
}

void write_density_csv(std::ostream& out, const DensityTable& table) {
  out << "t,r,density\n";
  for (std::size_t s = 0; s < table.times.size(); ++s) {
    const std::string t = format_double(table.times[s]);
    for (std::size_t j = 0; j < table.r.size(); ++j)
      out << t << ',' << format_double(table.r[j]) << ','
          << format_double(table.density(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)))
          << '\n';
  }
}

void write_series_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<double>& values, std::string_view column) {
  out << "t," << column << '\n';
  for (std::size_t i = 0; i < times.size(); ++i)
    out << format_double(times[i]) << ',' << format_double(values[i]) << '\n';
}

}  // namespace gupmarket
