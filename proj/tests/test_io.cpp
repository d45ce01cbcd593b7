#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gupmarket/commands.hpp"
#include "gupmarket/error.hpp"
#include "gupmarket/io.hpp"

using namespace gupmarket;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gupmarket_io_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig small_config(const std::string& name) {
  RunConfig c;
  c.params.m = 2800;
  c.params.beta = 1e-6;
  c.params.d = 0.2;
  c.params.lambda = 0.01;
  c.params.n_basis = 12;
  c.scan.steps = 21;
  c.scan.time_samples = 64;
  c.propagate.samples = 11;
  c.propagate.r_points = 21;
  c.out_dir = scratch(name).string();
  return c;
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2800.0) == "2800");
  CHECK(format_double(1e-6) == "1e-06");
  for (double x : {0.13229091730369007, -0.036025309739497874, 6.02e23, 5e-324}) {
    const std::string text = format_double(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("run configuration JSON round-trip") {
  RunConfig c = small_config("roundtrip");
  c.unit = TimeUnit::second;
  c.exact = true;
  c.propagate.interval_a = -0.05;
  c.calibrate.series_csv = "prices.csv";
  c.calibrate.market.reading = VolatilityReading::percent;
  CHECK(parse_run_config(dump_run_config(c)) == c);
  CHECK(parse_run_config("{}") == RunConfig{});
  CHECK(parse_run_config(R"({"params": {"m": 5}})").params.m == 5.0);
}

TEST_CASE("malformed configuration is a parse error") {
  for (const char* text : {"{", R"({"params": {"m": "heavy"}})", R"({"unit": "fortnight"})", "[1, 2]"}) {
    try {
      parse_run_config(text);
      FAIL("accepted " << text);
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::Usage);
    }
  }
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), Error);
}

TEST_CASE("CSV layouts") {
  ModelParams p;
  p.m = 2800;
  p.beta = 0.0;
  p.d = 0.2;
  p.n_basis = 4;
  const auto vp = validate_params(p);

  std::ostringstream spectrum;
  write_spectrum_csv(spectrum, spectrum_table(vp));
  std::istringstream lines(spectrum.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,e0,e1,E,omega0,omega");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // Without the GUP term the last two columns coincide.
    const auto last = line.rfind(',');
    const auto prev = line.rfind(',', last - 1);
    CHECK(line.substr(prev + 1, last - prev - 1) == line.substr(last + 1));
  }
  CHECK(rows == 4);

  std::ostringstream dipole;
  write_dipole_csv(dipole, dipole_matrix(vp));
  CHECK(dipole.str().rfind("# dim=4,d=0.2\nn,1,2,3,4\n1,0,", 0) == 0);

  std::ostringstream series;
  write_series_csv(series, {0.0, 0.5}, {1.0, 0.25}, "norm");
  CHECK(series.str() == "t,norm\n0,1\n0.5,0.25\n");
}

TEST_CASE("commands write deterministic files and self-describing summaries") {
  const RunConfig c = small_config("determinism");
  for (auto* command : {&cmd_spectrum, &cmd_scan, &cmd_propagate, &cmd_calibrate}) {
    const auto first = (*command)(c);
    std::vector<std::string> contents;
    for (const auto& f : first.files) contents.push_back(slurp(f));
    const auto second = (*command)(c);
    REQUIRE(second.files.size() == first.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) CHECK(slurp(second.files[i]) == contents[i]);

    CHECK(first.summary.at("version") == std::string(library_version()));
    CHECK(first.summary.at("config").get<RunConfig>() == c);
  }
  fs::remove_all(c.out_dir);
}

TEST_CASE("scan summary reports the located peak") {
  RunConfig c = small_config("scan");
  const auto out = cmd_scan(c);
  const auto& peaks = out.summary.at("peaks");
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0].at("n") == 2);
  CHECK(peaks[0].at("within_one_step").get<bool>());
  CHECK(out.summary.at("predicted_gup_shift_2").get<double>() > 0.0);

  c.scan.steps = 2;
  CHECK_THROWS_AS(cmd_scan(c), Error);
  fs::remove_all(small_config("scan").out_dir);
}

TEST_CASE("propagate summary stays unitary") {
  const RunConfig c = small_config("propagate");
  const auto out = cmd_propagate(c);
  CHECK(out.summary.at("max_norm_drift").get<double>() <= 1e-9);
  CHECK(out.summary.at("interval_probability_min").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.summary.at("density_slice_integral_max_error").get<double>() < 1e-2);
  CHECK(fs::exists(fs::path(c.out_dir) / "density.csv"));
  fs::remove_all(c.out_dir);
}

TEST_CASE("emitted calibration config reproduces the calibrated parameters") {
  RunConfig c = small_config("calibrate");
  const auto out = cmd_calibrate(c);
  const RunConfig emitted = out.summary.at("emitted_config").get<RunConfig>();
  const auto again = calibrate(emitted.calibrate.market, emitted.params.n_basis);
  CHECK(again.params.params() == emitted.params);
  CHECK(emitted.params.m == doctest::Approx(2800.0).epsilon(1e-14));
  fs::remove_all(c.out_dir);
}

TEST_CASE("calibration from a price file") {
  RunConfig c = small_config("series");
  fs::create_directories(c.out_dir);
  const fs::path csv = fs::path(c.out_dir) / "flat.csv";
  std::ofstream(csv) << "date,close\n2024-01-02,10\n2024-01-03,10\n2024-01-04,10\n";
  c.calibrate.series_csv = csv.string();
  try {
    cmd_calibrate(c);
    FAIL("constant prices accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVolatility);
  }

  std::ofstream(csv) << "date,close\n2024-01-02,100\n2024-01-03,101.00501670841679\n";
  const auto out = cmd_calibrate(c);
  CHECK(out.summary.at("series").at("points") == 2);
  CHECK(out.summary.at("calibration").at("sigma_annual").get<double>() ==
        doctest::Approx(0.158745078663875435).epsilon(1e-12));
  fs::remove_all(c.out_dir);
}
