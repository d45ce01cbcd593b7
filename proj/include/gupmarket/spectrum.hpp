#pragma once

#include <vector>

#include "gupmarket/model.hpp"

namespace gupmarket {

// phi_n(r) = sqrt(2/d) sin(n pi (r + d/2) / d) on [-d/2, d/2]. Throws
// OutOfWell outside the walls.
double eigenfunction_value(int n, double r, double d);

// n^2 pi^2 / (2 m d^2)
double uncorrected_energy(int n, const ValidatedParams& p);
// beta n^4 pi^4 / (3 m d^4)
double gup_energy_correction(int n, const ValidatedParams& p);
// Sum of the two terms above; n must lie in [1, n_basis].
double energy_level(int n, const ValidatedParams& p);

// Continuum-limit transition frequency pi^2 (n^2 - 1) / (2 m d^2).
double continuum_frequency(int n, const ValidatedParams& p);

// omega_n = E_n - E_1 for n >= 2.
double characteristic_frequency(int n, const ValidatedParams& p);

// omega_n^0 (1 + (4/3) beta m (n^2+1)/(n^2-1) omega_n^0), algebraically equal
// to characteristic_frequency.
double characteristic_frequency_shift_form(int n, const ValidatedParams& p);

struct Spectrum {
  ValidatedParams params;
  std::vector<double> energies;  // energies[i] is E_{i+1}
  std::vector<double> e0;
  std::vector<double> e1;

  std::size_t size() const { return energies.size(); }
  double energy(int n) const { return energies.at(static_cast<std::size_t>(n - 1)); }
  // Zero for n = 1.
  double omega0(int n) const;
  double omega(int n) const;
};

Spectrum spectrum_table(const ValidatedParams& p);

}  // namespace gupmarket
