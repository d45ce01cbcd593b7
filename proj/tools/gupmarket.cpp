// Command-line front end: spectrum | scan | propagate | calibrate.

#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gupmarket/commands.hpp"
#include "gupmarket/error.hpp"

namespace {

using namespace gupmarket;

// Command-line values are applied on top of the (optional) config file, so
// each option is recorded and replayed only when it was given.
class Overrides {
 public:
  template <typename T, typename Setter>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& help, Setter set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    entries_.push_back({opt, [value, set](RunConfig& c) { set(c, *value); }});
    return opt;
  }

  void apply(RunConfig& config) const {
    for (const auto& e : entries_)
      if (e.opt->count() > 0) e.set(config);
  }

 private:
  struct Entry {
    CLI::Option* opt;
    std::function<void(RunConfig&)> set;
  };
  std::vector<Entry> entries_;
};

void report_error(std::string_view kind, std::string_view category, const std::string& message) {
  nlohmann::json j{{"error", std::string(kind)},
                   {"category", std::string(category)},
                   {"message", message}};
  std::cerr << j.dump() << '\n';
}

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage: return "usage";
    case ErrorCategory::Domain: return "domain";
    case ErrorCategory::Numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven price-limited well with a minimal price uncertainty"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool exact = false;
  Overrides ov;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_flag("--exact", exact, "use numerical propagation in scans");
  ov.add<std::string>(&app, "--out", "output directory", [](RunConfig& c, const std::string& v) { c.out_dir = v; });
  ov.add<std::string>(&app, "--unit", "time unit for the run and its outputs (day|second)",
                      [](RunConfig& c, const std::string& v) { c.unit = time_unit_from_string(v); })
      ->check(CLI::IsMember({"day", "trading_day", "second"}));
  ov.add<std::size_t>(&app, "--n-basis", "basis truncation",
                      [](RunConfig& c, std::size_t v) { c.params.n_basis = v; });
  ov.add<double>(&app, "--m", "mass", [](RunConfig& c, double v) { c.params.m = v; });
  ov.add<double>(&app, "--beta", "GUP parameter (return^2)", [](RunConfig& c, double v) { c.params.beta = v; });
  ov.add<double>(&app, "--d", "well width", [](RunConfig& c, double v) { c.params.d = v; });
  ov.add<double>(&app, "--lambda", "drive amplitude", [](RunConfig& c, double v) { c.params.lambda = v; });
  ov.add<double>(&app, "--omega", "drive frequency", [](RunConfig& c, double v) { c.params.omega = v; });

  auto* spectrum = app.add_subcommand("spectrum", "energy levels and transition frequencies");

  auto* scan = app.add_subcommand("scan", "resonance scan over the drive frequency");
  ov.add<double>(scan, "--omega-min", "lower drive frequency (default 0.9 omega_2)", [](RunConfig& c, double v) { c.scan.omega_min = v; });
  ov.add<double>(scan, "--omega-max", "upper drive frequency (default 1.1 omega_2)", [](RunConfig& c, double v) { c.scan.omega_max = v; });
  ov.add<std::size_t>(scan, "--steps", "number of scan points", [](RunConfig& c, std::size_t v) { c.scan.steps = v; });
  ov.add<double>(scan, "--t-horizon", "time window per scan point (default 20 periods)", [](RunConfig& c, double v) { c.scan.t_horizon = v; });

  auto* prop = app.add_subcommand("propagate", "time evolution from the ground state");
  ov.add<double>(prop, "--t-final", "end time (default 5 periods of omega_2)", [](RunConfig& c, double v) { c.propagate.t_final = v; });
  ov.add<std::size_t>(prop, "--samples", "output time samples", [](RunConfig& c, std::size_t v) { c.propagate.samples = v; });
  ov.add<std::size_t>(prop, "--r-points", "density grid size (0 disables)",
                      [](RunConfig& c, std::size_t v) { c.propagate.r_points = v; });
  ov.add<double>(prop, "--interval-a", "lower edge of the probability interval", [](RunConfig& c, double v) { c.propagate.interval_a = v; });
  ov.add<double>(prop, "--interval-b", "upper edge of the probability interval", [](RunConfig& c, double v) { c.propagate.interval_b = v; });

  auto* cal = app.add_subcommand("calibrate", "model parameters from market observables");
  ov.add<double>(cal, "--sigma-annual", "annual volatility", [](RunConfig& c, double v) { c.calibrate.market.sigma_annual = v; });
  ov.add<double>(cal, "--mean-price", "mean price", [](RunConfig& c, double v) { c.calibrate.market.mean_price = v; });
  ov.add<double>(cal, "--tick", "minimal price increment", [](RunConfig& c, double v) { c.calibrate.market.tick = v; });
  ov.add<double>(cal, "--limit", "daily price-limit fraction",
                 [](RunConfig& c, double v) { c.calibrate.market.limit_fraction = v; });
  ov.add<std::string>(cal, "--sigma-reading", "fraction|percent",
                      [](RunConfig& c, const std::string& v) {
                        c.calibrate.market.reading = volatility_reading_from_string(v);
                      })
      ->check(CLI::IsMember({"fraction", "percent"}));
  ov.add<std::string>(cal, "--series", "CSV with header date,close",
                      [](RunConfig& c, const std::string& v) { c.calibrate.series_csv = v; });
  ov.add<double>(cal, "--periods-per-year", "sampling periods per year for --series",
                 [](RunConfig& c, double v) { c.calibrate.periods_per_year = v; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error("Usage", "usage", e.what());
    return 2;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    ov.apply(config);
    if (exact) config.exact = true;

    CommandOutput output;
    if (*spectrum) output = cmd_spectrum(config);
    else if (*scan) output = cmd_scan(config);
    else if (*prop) output = cmd_propagate(config);
    else if (*cal) output = cmd_calibrate(config);
    std::cout << output.summary.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    report_error(to_string(e.kind()), category_name(e.category()), e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    report_error("Internal", "numerical", e.what());
    return 4;
  }
}
