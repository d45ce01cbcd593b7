#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gupmarket/model.hpp"

namespace gupmarket {

enum class AmplitudeMethod { perturbative_first_order, numerical };

std::string_view to_string(AmplitudeMethod method);

// Basis coefficients sampled in time. Coefficients are stored in the
// interaction picture: psi(r, t) = sum_n c_n(t) exp(-i E_n t) phi_n(r).
struct AmplitudeTrajectory {
  std::vector<double> times;
  Eigen::MatrixXcd coeffs;  // coeffs(sample, n - 1)
  AmplitudeMethod method = AmplitudeMethod::numerical;
  ValidatedParams params;

  // Numerical runs only.
  double max_norm_drift = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t samples() const { return times.size(); }
  complex coeff(std::size_t sample, int n) const { return coeffs(sample, n - 1); }
};

// Uniform sample times 0, t_final/(samples-1), ..., t_final.
struct Sampling {
  std::size_t samples = 101;
};

struct PropagatorOptions {
  double local_tolerance = 1e-10;
  double norm_tolerance = 1e-9;
  double min_step_fraction = 1e-13;  // of t_final
  std::size_t max_steps = 50'000'000;
};

// c_n^(1)(t) for a system started in the ground state.
complex first_order_amplitude(int n, double t, const ValidatedParams& p);

// The same amplitude from adaptive quadrature of
// -i lambda <n|r|1> int_0^t cos(w t') exp(-i (E_1 - E_n) t') dt'.
complex dyson_first_order_numeric(int n, double t, const ValidatedParams& p);

// Upper bound on |c_2^(1)|^2 away from resonance: 4 lambda^2 <2|r|1>^2 / (E_2 - E_1 - w)^2.
double off_resonance_bound(const ValidatedParams& p);

// c_1 = 1, c_n = c_n^(1) for n >= 2, sampled like `propagate`.
AmplitudeTrajectory perturbative_trajectory(const ValidatedParams& p, double t_final,
                                            Sampling sampling);

// Integrates i da/dt = (diag(E) + lambda cos(w t) R) a in the truncated
// eigenbasis with an adaptive fourth-order Magnus scheme.
AmplitudeTrajectory propagate(const ValidatedParams& p, double t_final, Sampling sampling,
                              const PropagatorOptions& options = {});
AmplitudeTrajectory propagate(const ValidatedParams& p, const WaveState& initial,
                              double t_final, Sampling sampling,
                              const PropagatorOptions& options = {});

// sum_{n > 1} |c_n|^2 per sample.
std::vector<double> excited_probability(const AmplitudeTrajectory& traj);
// sum_n |c_n|^2 per sample.
std::vector<double> total_norm(const AmplitudeTrajectory& traj);

struct DensityTable {
  std::vector<double> times;
  std::vector<double> r;
  Eigen::MatrixXd density;              // density(sample, point)
  std::vector<double> slice_integrals;  // trapezoid rule over r per sample
};

DensityTable density_evolution(const AmplitudeTrajectory& traj, const std::vector<double>& r_grid);

// Probability of a return in [a, b] per sample, from closed-form overlap
// integrals of the eigenfunctions.
std::vector<double> interval_probability(const AmplitudeTrajectory& traj, double a, double b);

struct ResonancePeak {
  int n = 0;
  double omega_grid = 0.0;     // scan point with the local maximum
  double omega_refined = 0.0;  // vertex of the parabola through the three points around it
  double peak_prob = 0.0;
  double reference = 0.0;      // E_n - E_1
};

struct ScanOptions {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t steps = 201;
  double t_horizon = 0.0;
  std::size_t time_samples = 512;
  bool exact = false;
  PropagatorOptions propagator;
};

struct ResonanceScanResult {
  std::vector<double> omegas;
  std::vector<double> peak_prob;
  std::vector<ResonancePeak> located_peaks;
  std::vector<double> reference;  // reference[i] = omega_{i+2}
  double grid_step = 0.0;
  bool exact = false;
};

ResonanceScanResult resonance_scan(const ValidatedParams& p, const ScanOptions& options);

}  // namespace gupmarket
