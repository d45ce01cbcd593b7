#include "gupmarket/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gupmarket/error.hpp"

namespace gupmarket {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

Eigen::MatrixXd centered_derivative(Eigen::Index n, double h) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i + 1 < n) D(i, i + 1) = 0.5 / h;
    if (i > 0) D(i, i - 1) = -0.5 / h;
  }
  return D;
}

// Fourier collocation derivative for a grid of n points with period
// `period`; real and antisymmetric for either parity of n.
Eigen::MatrixXd spectral_derivative(Eigen::Index n, double period) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  const bool odd = (n % 2) == 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double angle = kPi * static_cast<double>(k) / static_cast<double>(n);
      D(i, j) = (kPi / period) * sign * (odd ? 1.0 / std::sin(angle) : 1.0 / std::tan(angle));
    }
  }
  return D;
}

}  // namespace

double dipole_element(int n, int k, double d) {
  if (n < 1 || k < 1) throw Error(ErrorKind::LevelOutOfRange, "levels must be >= 1");
  if ((n + k) % 2 == 0) return 0.0;
  const double nn = n, kk = k;
  const double gap = nn * nn - kk * kk;
  return -8.0 * nn * kk * d / (kPi * kPi * gap * gap);
}

DipoleMatrix dipole_matrix(const ValidatedParams& p) {
  const auto dim = p->n_basis;
  DipoleMatrix out{dim, p->d, Eigen::MatrixXd::Zero(dim, dim)};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double v = dipole_element(static_cast<int>(i + 1), static_cast<int>(j + 1), p->d);
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  return out;
}

bool UncertaintyPoint::admissible(double tolerance) const {
  return dp * dt >= 0.5 * (1.0 + beta0 * dt * dt + zeta) - tolerance;
}

std::optional<BoundaryBranches> uncertainty_boundary(double dp, double beta0, double zeta) {
  if (!(beta0 > 0.0)) throw Error(ErrorKind::NonPositiveBeta0, "beta0 must be positive");
  if (zeta < 0.0) throw Error(ErrorKind::NegativeValue, "zeta must be non-negative");
  double disc = dp * dp - (1.0 + zeta) * beta0;
  // dp = minimal_price_uncertainty(...) squares back to within rounding.
  if (std::abs(disc) <= 8.0 * std::numeric_limits<double>::epsilon() * dp * dp) disc = 0.0;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  return BoundaryBranches{(dp - root) / beta0, (dp + root) / beta0};
}

double minimal_price_uncertainty(double beta0, double mean_trend) {
  if (beta0 < 0.0) throw Error(ErrorKind::NegativeBeta, "beta0 must be non-negative");
  const double zeta = beta0 * mean_trend * mean_trend;
  return std::sqrt((1.0 + zeta) * beta0);
}

std::size_t GridOperatorPair::edge_rows() const {
  // T^2 spans six neighbours for the three-point first difference.
  return stencil == DerivativeStencil::centered_difference ? 6 : 0;
}

GridOperatorPair build_trend_operator(std::size_t grid_size, double beta0, double d,
                                      DerivativeStencil stencil) {
  if (grid_size < 16)
    throw Error(ErrorKind::GridTooSmall, "grid_size must be at least 16, got " +
                                             std::to_string(grid_size));
  if (!(d > 0.0)) throw Error(ErrorKind::NonPositive, "d must be positive");
  if (beta0 < 0.0) throw Error(ErrorKind::NegativeBeta, "beta0 must be non-negative");

  const auto n = static_cast<Eigen::Index>(grid_size);
  GridOperatorPair out;
  out.beta0 = beta0;
  out.stencil = stencil;

  Eigen::MatrixXd D;
  if (stencil == DerivativeStencil::centered_difference) {
    const double h = d / static_cast<double>(n - 1);
    out.grid = Eigen::VectorXd::LinSpaced(n, -0.5 * d, 0.5 * d);
    D = centered_derivative(n, h);
  } else {
    const double h = d / static_cast<double>(n);
    out.grid.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.grid(i) = -0.5 * d + h * static_cast<double>(i);
    D = spectral_derivative(n, d);
  }

  out.P = out.grid.cast<std::complex<double>>().asDiagonal();
  out.T0 = -kI * D.cast<std::complex<double>>();
  out.T_matrix = out.T0 + (beta0 / 3.0) * (out.T0 * out.T0 * out.T0);
  return out;
}

double hermiticity_residual(const GridOperatorPair& pair) {
  const auto n = static_cast<Eigen::Index>(pair.size());
  const auto e = static_cast<Eigen::Index>(pair.edge_rows());
  const auto len = n - 2 * e;
  if (len <= 0) return 0.0;
  const Eigen::MatrixXcd block = pair.T_matrix.block(e, e, len, len);
  return (block - block.adjoint()).cwiseAbs().maxCoeff();
}

double commutator_residual(const GridOperatorPair& pair, const Eigen::VectorXcd& test_state) {
  const auto n = static_cast<Eigen::Index>(pair.size());
  if (test_state.size() != n)
    throw Error(ErrorKind::InvalidArgument, "test state length does not match grid");

  const Eigen::MatrixXcd& T = pair.T_matrix;
  Eigen::MatrixXcd commutator(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      commutator(i, j) = (pair.grid(i) - pair.grid(j)) * T(i, j);

  const Eigen::VectorXcd t_psi = T * test_state;
  const Eigen::VectorXcd r =
      commutator * test_state - kI * (test_state + pair.beta0 * (T * t_psi));

  const auto e = static_cast<Eigen::Index>(pair.edge_rows());
  const auto len = n - 2 * e;
  const double denom = test_state.segment(e, len).norm();
  if (denom == 0.0) throw Error(ErrorKind::InvalidArgument, "test state vanishes on the interior");
  return r.segment(e, len).norm() / denom;
}

}  // namespace gupmarket
