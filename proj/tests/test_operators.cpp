#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gupmarket/error.hpp"
#include "gupmarket/operators.hpp"
#include "gupmarket/spectrum.hpp"
#include "oracles.hpp"

using namespace gupmarket;
using std::numbers::pi;

namespace {

double quadrature_dipole(int n, int k, double d) {
  return oracle::integrate(
      [&](double r) { return r * oracle::well_state(n, r, d) * oracle::well_state(k, r, d); },
      -0.5 * d, 0.5 * d);
}

Eigen::VectorXcd gaussian(const Eigen::VectorXd& grid, double width) {
  return (-(grid.array().square()) / (2 * width * width)).exp().cast<std::complex<double>>();
}

}  // namespace

TEST_CASE("dipole element examples") {
  CHECK(dipole_element(2, 1, 0.2) == doctest::Approx(-0.036025309739497874).epsilon(1e-13));
  CHECK(dipole_element(2, 1, 0.2) == doctest::Approx(-3.2 / (9 * pi * pi)).epsilon(1e-15));
  CHECK(dipole_element(3, 1, 0.2) == 0.0);
  CHECK(dipole_element(5, 5, 0.2) == 0.0);
  CHECK(dipole_element(4, 3, 0.2) == doctest::Approx(-0.03970136175373235).epsilon(1e-13));
  CHECK_THROWS_AS(dipole_element(0, 1, 0.2), Error);
}

TEST_CASE("closed-form dipole elements match quadrature") {
  for (double d : {0.2, 1.0, 3.5}) {
    double worst = 0.0;
    for (int n = 1; n <= 12; ++n)
      for (int k = 1; k <= 12; ++k)
        worst = std::max(worst, std::abs(dipole_element(n, k, d) - quadrature_dipole(n, k, d)));
    CHECK(worst <= 1e-10 * std::max(1.0, d));
  }
}

TEST_CASE("dipole matrix structure") {
  ModelParams q;
  q.d = 0.2;
  q.n_basis = 24;
  const auto m = dipole_matrix(validate_params(q));
  REQUIRE(m.dim == 24);
  CHECK(m.entries.isApprox(m.entries.transpose(), 0.0));
  for (int n = 1; n <= 24; ++n) {
    for (int k = 1; k <= 24; ++k) {
      if ((n + k) % 2 == 0) CHECK(m(n, k) == 0.0);
      else CHECK(m(n, k) != 0.0);
    }
    if (n % 2 == 0) {
      const double nn = n;
      CHECK(m(n, 1) == doctest::Approx(-8 * nn * 0.2 / ((nn * nn - 1) * (nn * nn - 1) * pi * pi)));
    }
  }
}

TEST_CASE("uncertainty boundary") {
  const double beta0 = 1e-4;
  // Discriminant vanishes at the minimum.
  const double zeta = 0.3;
  const double dp_min = minimal_price_uncertainty(beta0, std::sqrt(zeta / beta0));
  const auto at_min = uncertainty_boundary(dp_min, beta0, zeta);
  REQUIRE(at_min);
  CHECK(at_min->dt_minus == at_min->dt_plus);
  CHECK(at_min->dt_plus == doctest::Approx(dp_min / beta0).epsilon(1e-12));

  CHECK_FALSE(uncertainty_boundary(0.99 * std::sqrt(beta0), beta0, 0.0));

  const auto b = uncertainty_boundary(2 * std::sqrt(beta0), beta0, 0.0);
  REQUIRE(b);
  CHECK(b->dt_minus == doctest::Approx(26.794919243112271).epsilon(1e-12));
  CHECK(b->dt_plus == doctest::Approx(373.20508075688773).epsilon(1e-12));
  // Both branches lie on the boundary of the inequality.
  for (double dt : {b->dt_minus, b->dt_plus}) {
    const double lhs = 2 * std::sqrt(beta0) * dt;
    CHECK(lhs == doctest::Approx(0.5 * (1 + beta0 * dt * dt)).epsilon(1e-12));
    CHECK(UncertaintyPoint{2 * std::sqrt(beta0), dt, beta0, 0.0}.admissible(1e-12));
  }
  // Strictly between the branches the inequality holds.
  CHECK(UncertaintyPoint{2 * std::sqrt(beta0), 100.0, beta0, 0.0}.admissible());
  CHECK_FALSE(UncertaintyPoint{2 * std::sqrt(beta0), 10.0, beta0, 0.0}.admissible());

  try {
    uncertainty_boundary(1.0, 0.0, 0.0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveBeta0);
  }
}

TEST_CASE("minimal price uncertainty") {
  CHECK(minimal_price_uncertainty(1e-4, 0.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(minimal_price_uncertainty(0.0, 42.0) == 0.0);
  CHECK(minimal_price_uncertainty(1e-4, 100.0) == doctest::Approx(0.014142135623730950).epsilon(1e-14));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double b = 1e-3 * u(rng), t = 50 * u(rng);
    CHECK(minimal_price_uncertainty(b * 1.1, t) >= minimal_price_uncertainty(b, t));
    CHECK(minimal_price_uncertainty(b, t + 1) >= minimal_price_uncertainty(b, t));
    CHECK(minimal_price_uncertainty(b, -t) == minimal_price_uncertainty(b, t));
    if (b > 0) {
      const double zeta = b * t * t;
      const auto br = uncertainty_boundary(minimal_price_uncertainty(b, t), b, zeta);
      REQUIRE(br);
      CHECK(br->dt_plus == br->dt_minus);
    }
  }
}

TEST_CASE("trend operator construction") {
  CHECK_THROWS_AS(build_trend_operator(15, 0.0, 1.0), Error);

  for (auto stencil : {DerivativeStencil::centered_difference, DerivativeStencil::spectral}) {
    const auto flat = build_trend_operator(64, 0.0, 2.0, stencil);
    CHECK(flat.T_matrix.isApprox(flat.T0, 0.0));
    const auto deformed = build_trend_operator(64, 1e-3, 2.0, stencil);
    CHECK(hermiticity_residual(deformed) < 1e-10);
    CHECK(deformed.P.isApprox(Eigen::MatrixXcd(deformed.grid.cast<std::complex<double>>().asDiagonal())));
  }
}

TEST_CASE("deformed trend acts on plane waves as q (1 + beta0 q^2 / 3)") {
  const double d = 2 * pi, beta0 = 1e-2;
  {
    // Spectral: exact for resolved wavenumbers on the periodic grid.
    const auto pair = build_trend_operator(65, beta0, d, DerivativeStencil::spectral);
    for (double q : {1.0, 3.0, 7.0}) {
      const Eigen::VectorXcd wave = (std::complex<double>(0, 1) * q * pair.grid.array()).exp();
      const Eigen::VectorXcd image = pair.T_matrix * wave;
      const auto expected = q * (1 + beta0 * q * q / 3);
      CHECK((image - expected * wave).norm() / wave.norm() < 1e-10);
    }
  }
  {
    // Centered difference: symbol sin(qh)/h in the interior.
    const auto pair = build_trend_operator(401, beta0, d);
    const double h = pair.grid(1) - pair.grid(0);
    const double q = 2.0;
    const Eigen::VectorXcd wave = (std::complex<double>(0, 1) * q * pair.grid.array()).exp();
    const Eigen::VectorXcd image = pair.T_matrix * wave;
    const double symbol = std::sin(q * h) / h;
    const double expected = symbol * (1 + beta0 * symbol * symbol / 3);
    for (Eigen::Index i = 10; i < 391; i += 19)
      CHECK(std::abs(image(i) / wave(i) - expected) < 1e-9);
    // Leading stencil error q^3 h^2 / 6.
    CHECK(std::abs(expected - q * (1 + beta0 * q * q / 3)) < 1.2 * q * q * q * h * h / 6);
  }
}

TEST_CASE("canonical commutator at beta0 = 0 is the grid error only") {
  const double d = 8.0;
  const auto coarse = build_trend_operator(201, 0.0, d);
  const auto fine = build_trend_operator(801, 0.0, d);
  const double rc = commutator_residual(coarse, gaussian(coarse.grid, 0.5));
  const double rf = commutator_residual(fine, gaussian(fine.grid, 0.5));
  // [x, centered D] = -(average of neighbours): residual ~ h^2 |psi''| / 2.
  CHECK(rf < rc);
  CHECK(rc / rf == doctest::Approx(16.0).epsilon(0.05));
  const auto spectral = build_trend_operator(257, 0.0, d, DerivativeStencil::spectral);
  CHECK(commutator_residual(spectral, gaussian(spectral.grid, 0.5)) < 1e-10);
}

TEST_CASE("commutator residual grows as beta0^2") {
  const double d = 8.0;
  std::vector<double> betas{1e-4, 3e-4, 1e-3, 3e-3, 1e-2}, residuals;
  for (double b : betas) {
    const auto pair = build_trend_operator(257, b, d, DerivativeStencil::spectral);
    residuals.push_back(commutator_residual(pair, gaussian(pair.grid, 0.5)));
  }
  const double slope = oracle::log_log_slope(betas, residuals);
  CHECK(slope >= 1.9);
  CHECK(slope <= 2.1);
  // Doubling a small beta0 quadruples the residual.
  const auto r1 = commutator_residual(build_trend_operator(257, 1e-4, d, DerivativeStencil::spectral),
                                      gaussian(build_trend_operator(257, 0, d, DerivativeStencil::spectral).grid, 0.5));
  const auto r2 = commutator_residual(build_trend_operator(257, 2e-4, d, DerivativeStencil::spectral),
                                      gaussian(build_trend_operator(257, 0, d, DerivativeStencil::spectral).grid, 0.5));
  CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("grid refinement settles on a beta0^2 plateau") {
  const double d = 8.0, b = 1e-3;
  std::vector<double> values;
  for (std::size_t n : {129, 193, 257, 385}) {
    const auto pair = build_trend_operator(n, b, d, DerivativeStencil::spectral);
    values.push_back(commutator_residual(pair, gaussian(pair.grid, 0.5)));
  }
  for (std::size_t i = 1; i < values.size(); ++i)
    CHECK(std::abs(values[i] - values.back()) <= 1e-6 * values.back());
  // Continuum value: in Fourier space the residual multiplies psi-hat by
  // beta0 ((2 beta0 / 3) k^4 + (beta0^2 / 9) k^6).
  const double s = 0.5;
  auto weight = [&](double k) { return std::exp(-k * k * s * s); };
  const double num = oracle::integrate(
      [&](double k) {
        const double f = b * (2 * b / 3 * std::pow(k, 4) + b * b / 9 * std::pow(k, 6));
        return f * f * weight(k);
      },
      -40, 40);
  const double den = oracle::integrate(weight, -40, 40);
  CHECK(values.back() == doctest::Approx(std::sqrt(num / den)).epsilon(1e-6));
}
