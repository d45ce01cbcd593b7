#pragma once

// Independent reference computations used only by the tests.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

namespace oracle {

// Composite five-point Gauss-Legendre rule.
template <typename F>
auto integrate(F&& f, double a, double b, std::size_t panels = 4096) {
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831,
                                           -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665,
                                           0.4786286704993665, 0.2369268850561891,
                                           0.2369268850561891};
  const double h = (b - a) / static_cast<double>(panels);
  decltype(f(a)) sum{};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + h * (static_cast<double>(p) + 0.5);
    for (std::size_t k = 0; k < 5; ++k) sum += w[k] * f(mid + 0.5 * h * x[k]);
  }
  return sum * (0.5 * h);
}

inline double well_state(int n, double r, double d) {
  return std::sqrt(2.0 / d) * std::sin(n * M_PI * (r + 0.5 * d) / d);
}

// Lowest `count` eigenvalues of -(1/2m) D2 + (beta/3m) D2^2 on `interior`
// points with zero Dirichlet values at +-d/2.
inline std::vector<double> fd_well_energies(double m, double beta, double d, int interior, int count) {
  const double h = d / (interior + 1);
  const double a = 1.0 / (2.0 * m * h * h);   // kinetic
  const double b = beta / (3.0 * m * h * h * h * h);  // quartic
  // Upper band storage, kd = 2: ab[(kd + i - j) + j * ldab] for i <= j.
  const int kd = 2, ldab = kd + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab * interior), 0.0);
  auto at = [&](int i, int j) -> double& { return ab[static_cast<std::size_t>(kd + i - j + j * ldab)]; };
  for (int j = 0; j < interior; ++j) {
    // D2^2 with ghost values zero: diagonal 6 except 5 next to a wall.
    const double quartic_diag = (j == 0 || j == interior - 1) ? 5.0 : 6.0;
    at(j, j) = 2.0 * a + quartic_diag * b;
    if (j >= 1) at(j - 1, j) = -a - 4.0 * b;
    if (j >= 2) at(j - 2, j) = b;
  }
  std::vector<double> w(static_cast<std::size_t>(interior));
  std::vector<double> z(1);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(interior));
  std::vector<double> q(1);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', interior, kd, ab.data(), ldab,
                                         q.data(), 1, 0.0, 0.0, 1, count, 0.0, &found, w.data(),
                                         z.data(), 1, ifail.data());
  if (info != 0 || found != count) throw std::runtime_error("dsbevx failed");
  w.resize(static_cast<std::size_t>(count));
  return w;
}

// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
