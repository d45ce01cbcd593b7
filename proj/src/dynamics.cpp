#include "gupmarket/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gupmarket/error.hpp"
#include "gupmarket/operators.hpp"
#include "gupmarket/spectrum.hpp"

namespace gupmarket {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr complex kI{0.0, 1.0};

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void check_excited_level(int n, const ValidatedParams& p) {
  if (n < 2 || static_cast<std::size_t>(n) > p->n_basis)
    throw Error(ErrorKind::LevelOutOfRange, "level " + std::to_string(n) + " outside [2, " +
                                                std::to_string(p->n_basis) + "]");
}

// (exp(i delta t) - 1) / delta, replaced by its limit i t inside the guard.
complex phase_bracket(double delta, double t, double guard) {
  if (std::abs(delta) < guard) return kI * t;
  const double half = 0.5 * delta * t;
  const double s = std::sin(half);
  return complex{-2.0 * s * s, std::sin(delta * t)} / delta;
}

std::vector<double> sample_times(double t_final, Sampling sampling) {
  if (sampling.samples < 2)
    throw Error(ErrorKind::InvalidArgument, "sampling needs at least 2 samples");
  std::vector<double> times(sampling.samples);
  const double dt = t_final / static_cast<double>(sampling.samples - 1);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = dt * static_cast<double>(i);
  times.back() = t_final;
  return times;
}

void check_horizon(double t_final) {
  if (!(t_final > 0.0) || !std::isfinite(t_final))
    throw Error(ErrorKind::InvalidArgument, "t_final must be positive");
}

// Fourth-order Magnus step for H(t) = diag(E) + f(t) R with f = lambda cos(w t).
// The single commutator [H(t2), H(t1)] reduces to (f1 - f2) [diag(E), R].
class MagnusStepper {
 public:
  MagnusStepper(const ValidatedParams& p, const Eigen::VectorXd& energies,
                const Eigen::MatrixXd& dipole)
      : lambda_(p->lambda), omega_(p->omega), energies_(energies), dipole_(dipole) {
    const auto n = energies.size();
    commutator_.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        commutator_(i, j) = (energies(i) - energies(j)) * dipole(i, j);
  }

  Eigen::VectorXcd step(const Eigen::VectorXcd& state, double t, double h) {
    constexpr double kNode = 0.28867513459481288225;  // sqrt(3)/6
    const double f1 = lambda_ * std::cos(omega_ * (t + (0.5 - kNode) * h));
    const double f2 = lambda_ * std::cos(omega_ * (t + (0.5 + kNode) * h));

    const auto n = energies_.size();
    Eigen::MatrixXcd k(n, n);
    const double mean_field = 0.5 * h * (f1 + f2);
    const double comm_scale = (std::sqrt(3.0) / 12.0) * h * h * (f1 - f2);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        k(i, j) = complex{mean_field * dipole_(i, j), -comm_scale * commutator_(i, j)};
    k.diagonal().array() += h * energies_.array();

    solver_.compute(k, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXcd& v = solver_.eigenvectors();
    Eigen::VectorXcd y = v.adjoint() * state;
    for (Eigen::Index i = 0; i < n; ++i)
      y(i) *= std::exp(complex{0.0, -solver_.eigenvalues()(i)});
    return v * y;
  }

 private:
  double lambda_;
  double omega_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd dipole_;
  Eigen::MatrixXd commutator_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver_;
};

}  // namespace

std::string_view to_string(AmplitudeMethod method) {
  return method == AmplitudeMethod::numerical ? "numerical" : "perturbative_first_order";
}

complex first_order_amplitude(int n, double t, const ValidatedParams& p) {
  check_excited_level(n, p);
  const double r_n1 = dipole_element(n, 1, p->d);
  if (r_n1 == 0.0 || t == 0.0) return {0.0, 0.0};
  const double gap = characteristic_frequency(n, p);
  const double guard = 1e-8 * characteristic_frequency(2, p);
  // -i lambda R_n1 times the integral of cos(w t') exp(i gap t'), which splits
  // into the co- and counter-rotating brackets with a factor 1/(2i).
  return -0.5 * p->lambda * r_n1 *
         (phase_bracket(gap + p->omega, t, guard) + phase_bracket(gap - p->omega, t, guard));
}

complex dyson_first_order_numeric(int n, double t, const ValidatedParams& p) {
  check_excited_level(n, p);
  const double r_n1 = dipole_element(n, 1, p->d);
  if (r_n1 == 0.0 || t == 0.0) return {0.0, 0.0};
  const double gap = energy_level(n, p) - energy_level(1, p);
  const double w = p->omega;

  // Equal-width segments share the same local integrals; the offset of each
  // segment enters through angle addition, which keeps the integrand
  // arguments small and the error estimate honest.
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double fastest = gap + w;
  const auto segments = static_cast<std::size_t>(std::ceil(std::abs(t) * fastest / kPi)) + 1;
  const double width = t / static_cast<double>(segments);

  double local_err = 0.0;
  auto local = [&](auto f) {
    double e = 0.0;
    const double v = Integrator::integrate(f, 0.0, width, 15, 1e-14, &e);
    local_err += e;
    return v;
  };
  const complex cos_part(local([&](double u) { return std::cos(w * u) * std::cos(gap * u); }),
                         local([&](double u) { return std::cos(w * u) * std::sin(gap * u); }));
  const complex sin_part(local([&](double u) { return std::sin(w * u) * std::cos(gap * u); }),
                         local([&](double u) { return std::sin(w * u) * std::sin(gap * u); }));

  complex sum{0.0, 0.0};
  double scale = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    const double a = width * static_cast<double>(s);
    const complex seg =
        std::polar(1.0, gap * a) * (std::cos(w * a) * cos_part - std::sin(w * a) * sin_part);
    sum += seg;
    scale += std::abs(seg);
  }
  const double re = sum.real(), im = sum.imag();
  const double err_total = local_err * static_cast<double>(segments);
  const double magnitude = std::abs(sum);
  if (err_total > 1e-10 * std::max(magnitude, 1e-6 * scale))
    throw Error(ErrorKind::QuadratureFailure,
                "Dyson integral error estimate " + format_sci(err_total) + " (magnitude " +
                    format_sci(magnitude) + ") exceeds tolerance");
  return -kI * p->lambda * r_n1 * complex{re, im};
}

double off_resonance_bound(const ValidatedParams& p) {
  const double r21 = dipole_element(2, 1, p->d);
  const double detuning = characteristic_frequency(2, p) - p->omega;
  return 4.0 * p->lambda * p->lambda * r21 * r21 / (detuning * detuning);
}

AmplitudeTrajectory perturbative_trajectory(const ValidatedParams& p, double t_final,
                                            Sampling sampling) {
  check_horizon(t_final);
  AmplitudeTrajectory traj;
  traj.times = sample_times(t_final, sampling);
  traj.method = AmplitudeMethod::perturbative_first_order;
  traj.params = p;
  const auto n_basis = static_cast<Eigen::Index>(p->n_basis);
  traj.coeffs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(traj.times.size()), n_basis);
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const auto row = static_cast<Eigen::Index>(s);
    traj.coeffs(row, 0) = 1.0;
    for (int n = 2; n <= n_basis; n += 2)
      traj.coeffs(row, n - 1) = first_order_amplitude(n, traj.times[s], p);
  }
  return traj;
}

AmplitudeTrajectory propagate(const ValidatedParams& p, double t_final, Sampling sampling,
                              const PropagatorOptions& options) {
  return propagate(p, ground_state(p->n_basis), t_final, sampling, options);
}

AmplitudeTrajectory propagate(const ValidatedParams& p, const WaveState& initial, double t_final,
                              Sampling sampling, const PropagatorOptions& options) {
  check_horizon(t_final);
  if (initial.coeffs.size() != p->n_basis)
    throw Error(ErrorKind::InvalidArgument, "initial state size does not match n_basis");

  const Spectrum spectrum = spectrum_table(p);
  const auto n = static_cast<Eigen::Index>(p->n_basis);
  const Eigen::VectorXd energies = Eigen::Map<const Eigen::VectorXd>(spectrum.energies.data(), n);
  MagnusStepper stepper(p, energies, dipole_matrix(p).entries);

  AmplitudeTrajectory traj;
  traj.times = sample_times(t_final, sampling);
  traj.method = AmplitudeMethod::numerical;
  traj.params = p;
  traj.coeffs.resize(static_cast<Eigen::Index>(traj.times.size()), n);

  Eigen::VectorXcd state(n);
  for (Eigen::Index i = 0; i < n; ++i) state(i) = initial.coeffs[static_cast<std::size_t>(i)];
  const double norm0 = state.squaredNorm();

  auto record = [&](std::size_t sample, double t) {
    const auto row = static_cast<Eigen::Index>(sample);
    for (Eigen::Index i = 0; i < n; ++i)
      traj.coeffs(row, i) = state(i) * std::exp(complex{0.0, energies(i) * t});
    const double drift = std::abs(state.squaredNorm() - norm0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (drift > options.norm_tolerance)
      throw Error(ErrorKind::StepFailure,
                  "norm drift " + std::to_string(drift) + " exceeds tolerance at t = " +
                      std::to_string(t));
  };

  const double gap = energies(1) - energies(0);
  const double fastest = std::max(p->omega, gap);
  double h = std::min(t_final / static_cast<double>(traj.times.size() - 1),
                      0.05 * 2.0 * kPi / fastest);
  const double h_min = options.min_step_fraction * t_final;

  double t = 0.0;
  record(0, t);
  std::size_t steps = 0;
  for (std::size_t sample = 1; sample < traj.times.size(); ++sample) {
    const double target = traj.times[sample];
    while (t < target) {
      if (++steps > options.max_steps)
        throw Error(ErrorKind::StepFailure, "step budget exhausted");
      const bool clipped = t + h >= target;
      const double step = clipped ? target - t : h;

      const Eigen::VectorXcd full = stepper.step(state, t, step);
      const Eigen::VectorXcd half = stepper.step(state, t, 0.5 * step);
      const Eigen::VectorXcd two_halves = stepper.step(half, t + 0.5 * step, 0.5 * step);
      const double err = (two_halves - full).norm() / 15.0;

      if (err <= options.local_tolerance) {
        state = two_halves;
        t = clipped ? target : t + step;
        ++traj.accepted_steps;
        const double grow = err > 0.0 ? 0.9 * std::pow(options.local_tolerance / err, 0.2) : 2.0;
        const double proposal = step * std::clamp(grow, 0.2, 2.0);
        // A clipped step says nothing about how large the next one may be.
        h = clipped ? std::max(h, proposal) : proposal;
      } else {
        ++traj.rejected_steps;
        h = step * std::clamp(0.9 * std::pow(options.local_tolerance / err, 0.2), 0.1, 0.5);
        if (h < h_min)
          throw Error(ErrorKind::StepFailure,
                      "step size underflow at t = " + std::to_string(t));
      }
    }
    record(sample, t);
  }
  return traj;
}

std::vector<double> excited_probability(const AmplitudeTrajectory& traj) {
  std::vector<double> out(traj.samples());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto row = traj.coeffs.row(static_cast<Eigen::Index>(s));
    out[s] = row.tail(row.size() - 1).squaredNorm();
  }
  return out;
}

std::vector<double> total_norm(const AmplitudeTrajectory& traj) {
  std::vector<double> out(traj.samples());
  for (std::size_t s = 0; s < out.size(); ++s)
    out[s] = traj.coeffs.row(static_cast<Eigen::Index>(s)).squaredNorm();
  return out;
}

DensityTable density_evolution(const AmplitudeTrajectory& traj, const std::vector<double>& r_grid) {
  const ValidatedParams& p = traj.params;
  const double d = p->d;
  const auto n = static_cast<Eigen::Index>(p->n_basis);
  const auto points = static_cast<Eigen::Index>(r_grid.size());

  Eigen::MatrixXd phi(n, points);
  for (Eigen::Index j = 0; j < points; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      phi(i, j) = eigenfunction_value(static_cast<int>(i + 1), r_grid[static_cast<std::size_t>(j)], d);

  const Spectrum spectrum = spectrum_table(p);
  DensityTable out;
  out.times = traj.times;
  out.r = r_grid;
  out.density.resize(static_cast<Eigen::Index>(traj.samples()), points);
  out.slice_integrals.resize(traj.samples(), 0.0);

  Eigen::RowVectorXcd amps(n);
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    const double t = traj.times[s];
    const auto row = static_cast<Eigen::Index>(s);
    for (Eigen::Index i = 0; i < n; ++i)
      amps(i) = traj.coeffs(row, i) *
                std::exp(complex{0.0, -spectrum.energies[static_cast<std::size_t>(i)] * t});
    const Eigen::RowVectorXcd psi = amps * phi.cast<complex>();
    out.density.row(row) = psi.cwiseAbs2();

    double integral = 0.0;
    for (Eigen::Index j = 1; j < points; ++j)
      integral += 0.5 * (out.density(row, j) + out.density(row, j - 1)) *
                  (r_grid[static_cast<std::size_t>(j)] - r_grid[static_cast<std::size_t>(j - 1)]);
    out.slice_integrals[s] = integral;
  }
  return out;
}

std::vector<double> interval_probability(const AmplitudeTrajectory& traj, double a, double b) {
  const ValidatedParams& p = traj.params;
  const double d = p->d;
  if (a > b) std::swap(a, b);
  if (a < -0.5 * d || b > 0.5 * d)
    throw Error(ErrorKind::OutOfWell, "interval extends outside the well");

  // int phi_n phi_k = (1/d) int [cos((n-k) pi x/d) - cos((n+k) pi x/d)] dx, x = r + d/2
  const double xa = a + 0.5 * d, xb = b + 0.5 * d;
  auto antiderivative = [d](int j, double x) {
    if (j == 0) return x;
    const double q = j * kPi / d;
    return std::sin(q * x) / q;
  };
  const auto n = static_cast<Eigen::Index>(p->n_basis);
  Eigen::MatrixXd overlap(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      const int ni = static_cast<int>(i + 1), nk = static_cast<int>(k + 1);
      overlap(i, k) = ((antiderivative(ni - nk, xb) - antiderivative(ni - nk, xa)) -
                       (antiderivative(ni + nk, xb) - antiderivative(ni + nk, xa))) / d;
    }

  const Spectrum spectrum = spectrum_table(p);
  std::vector<double> out(traj.samples());
  Eigen::VectorXcd amps(n);
  for (std::size_t s = 0; s < out.size(); ++s) {
    const double t = traj.times[s];
    for (Eigen::Index i = 0; i < n; ++i)
      amps(i) = traj.coeffs(static_cast<Eigen::Index>(s), i) *
                std::exp(complex{0.0, -spectrum.energies[static_cast<std::size_t>(i)] * t});
    out[s] = std::real(amps.dot(overlap.cast<complex>() * amps));
  }
  return out;
}

ResonanceScanResult resonance_scan(const ValidatedParams& p, const ScanOptions& options) {
  if (options.steps < 3) throw Error(ErrorKind::InvalidArgument, "scan needs at least 3 steps");
  if (!(options.omega_min > 0.0) || !(options.omega_max > options.omega_min))
    throw Error(ErrorKind::InvalidArgument, "omega range must be positive and increasing");
  check_horizon(options.t_horizon);

  ResonanceScanResult out;
  out.exact = options.exact;
  out.grid_step = (options.omega_max - options.omega_min) / static_cast<double>(options.steps - 1);
  out.omegas.resize(options.steps);
  for (std::size_t i = 0; i < options.steps; ++i)
    out.omegas[i] = options.omega_min + out.grid_step * static_cast<double>(i);
  out.omegas.back() = options.omega_max;
  out.peak_prob.assign(options.steps, 0.0);

  const Sampling sampling{options.time_samples};
  std::exception_ptr failure;
  const auto count = static_cast<long>(options.steps);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      ModelParams q = p.params();
      q.omega = out.omegas[static_cast<std::size_t>(i)];
      const ValidatedParams vq = validate_params(q);
      const AmplitudeTrajectory traj =
          options.exact ? propagate(vq, options.t_horizon, sampling, options.propagator)
                        : perturbative_trajectory(vq, options.t_horizon, sampling);
      const auto excited = excited_probability(traj);
      out.peak_prob[static_cast<std::size_t>(i)] = *std::max_element(excited.begin(), excited.end());
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (int n = 2; n <= static_cast<int>(p->n_basis); ++n)
    out.reference.push_back(characteristic_frequency(n, p));

  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < options.steps; ++i)
    if (out.peak_prob[i] >= out.peak_prob[i - 1] && out.peak_prob[i] > out.peak_prob[i + 1])
      maxima.push_back(i);

  for (int n = 2; n <= static_cast<int>(p->n_basis); ++n) {
    const double ref = out.reference[static_cast<std::size_t>(n - 2)];
    if (ref < options.omega_min || ref > options.omega_max || maxima.empty()) continue;
    const auto nearest = *std::min_element(maxima.begin(), maxima.end(), [&](auto a, auto b) {
      return std::abs(out.omegas[a] - ref) < std::abs(out.omegas[b] - ref);
    });
    const double left = out.peak_prob[nearest - 1];
    const double mid = out.peak_prob[nearest];
    const double right = out.peak_prob[nearest + 1];
    const double curvature = left - 2.0 * mid + right;
    const double offset = curvature < 0.0 ? 0.5 * (left - right) / curvature : 0.0;
    out.located_peaks.push_back(ResonancePeak{n, out.omegas[nearest],
                                              out.omegas[nearest] + offset * out.grid_step, mid,
                                              ref});
  }
  return out;
}

}  // namespace gupmarket
