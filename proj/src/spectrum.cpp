#include "gupmarket/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gupmarket/error.hpp"

namespace gupmarket {

namespace {

constexpr double kPi = std::numbers::pi;

void check_level(int n, const ValidatedParams& p) {
  if (n < 1 || static_cast<std::size_t>(n) > p->n_basis)
    throw Error(ErrorKind::LevelOutOfRange,
                "level " + std::to_string(n) + " outside [1, " +
                    std::to_string(p->n_basis) + "]");
}

void check_transition_level(int n, const ValidatedParams& p) {
  if (n < 2)
    throw Error(ErrorKind::LevelOutOfRange,
                "transition frequencies need n >= 2, got " + std::to_string(n));
  check_level(n, p);
}

}  // namespace

double eigenfunction_value(int n, double r, double d) {
  if (n < 1) throw Error(ErrorKind::LevelOutOfRange, "level must be >= 1");
  if (std::abs(r) > 0.5 * d)
    throw Error(ErrorKind::OutOfWell, "r = " + std::to_string(r) + " lies outside the well");
  // Exact zeros at the walls; sin(n pi) is only ~1e-16 in floating point.
  if (std::abs(r) == 0.5 * d) return 0.0;
  return std::sqrt(2.0 / d) * std::sin(n * kPi * (r + 0.5 * d) / d);
}

double uncorrected_energy(int n, const ValidatedParams& p) {
  check_level(n, p);
  const double nn = static_cast<double>(n);
  return nn * nn * kPi * kPi / (2.0 * p->m * p->d * p->d);
}

double gup_energy_correction(int n, const ValidatedParams& p) {
  check_level(n, p);
  const double n2 = static_cast<double>(n) * n;
  const double d2 = p->d * p->d;
  return p->beta * n2 * n2 * kPi * kPi * kPi * kPi / (3.0 * p->m * d2 * d2);
}

double energy_level(int n, const ValidatedParams& p) {
  return uncorrected_energy(n, p) + gup_energy_correction(n, p);
}

double continuum_frequency(int n, const ValidatedParams& p) {
  check_transition_level(n, p);
  const double nn = static_cast<double>(n);
  return kPi * kPi * (nn * nn - 1.0) / (2.0 * p->m * p->d * p->d);
}

double characteristic_frequency(int n, const ValidatedParams& p) {
  check_transition_level(n, p);
  // Continuum gap in closed form, so beta = 0 reproduces it bit for bit.
  return continuum_frequency(n, p) + (gup_energy_correction(n, p) - gup_energy_correction(1, p));
}

double characteristic_frequency_shift_form(int n, const ValidatedParams& p) {
  const double w0 = continuum_frequency(n, p);
  const double n2 = static_cast<double>(n) * n;
  return w0 * (1.0 + (4.0 / 3.0) * p->beta * p->m * ((n2 + 1.0) / (n2 - 1.0)) * w0);
}

double Spectrum::omega0(int n) const {
  return n == 1 ? 0.0 : continuum_frequency(n, params);
}

double Spectrum::omega(int n) const {
  if (n == 1) return 0.0;
  const auto i = static_cast<std::size_t>(n - 1);
  return continuum_frequency(n, params) + (e1.at(i) - e1.at(0));
}

Spectrum spectrum_table(const ValidatedParams& p) {
  Spectrum s{p, {}, {}, {}};
  const auto n_basis = p->n_basis;
  s.energies.reserve(n_basis);
  s.e0.reserve(n_basis);
  s.e1.reserve(n_basis);
  for (std::size_t i = 0; i < n_basis; ++i) {
    const int n = static_cast<int>(i + 1);
    s.e0.push_back(uncorrected_energy(n, p));
    s.e1.push_back(gup_energy_correction(n, p));
    s.energies.push_back(s.e0.back() + s.e1.back());
  }
  return s;
}

}  // namespace gupmarket
