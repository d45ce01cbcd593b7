#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

#include "gupmarket/model.hpp"

namespace gupmarket {

// <n|r|k> between well eigenstates: -8 n k d / (pi^2 (n^2 - k^2)^2) when
// n + k is odd, exactly zero otherwise (diagonal included).
double dipole_element(int n, int k, double d);

struct DipoleMatrix {
  std::size_t dim = 0;
  double d = 0.0;
  Eigen::MatrixXd entries;  // entries(i, j) = <i+1|r|j+1>

  double operator()(int n, int k) const { return entries(n - 1, k - 1); }
};

DipoleMatrix dipole_matrix(const ValidatedParams& p);

// A point in the (price uncertainty, trend uncertainty) plane.
struct UncertaintyPoint {
  double dp = 0.0;
  double dt = 0.0;
  double beta0 = 0.0;
  double zeta = 0.0;

  // dp * dt >= (1 + beta0 dt^2 + zeta) / 2
  bool admissible(double tolerance = 0.0) const;
};

struct BoundaryBranches {
  double dt_minus;
  double dt_plus;
};

// Trend uncertainties on the edge of the allowed region for a given price
// uncertainty. Empty when dp^2 < (1 + zeta) beta0 (no real branch).
std::optional<BoundaryBranches> uncertainty_boundary(double dp, double beta0, double zeta);

// sqrt((1 + zeta) beta0) with zeta = beta0 <T>^2.
double minimal_price_uncertainty(double beta0, double mean_trend);

enum class DerivativeStencil {
  centered_difference,  // (f[i+1] - f[i-1]) / 2h, grid includes both walls
  spectral,             // Fourier collocation on the periodic grid [-d/2, d/2)
};

// Position and deformed trend operators sampled on a uniform grid.
struct GridOperatorPair {
  Eigen::VectorXd grid;
  Eigen::MatrixXcd P;        // diag(grid)
  Eigen::MatrixXcd T0;       // -i d/dx
  Eigen::MatrixXcd T_matrix; // T0 + (beta0 / 3) T0^3
  double beta0 = 0.0;
  DerivativeStencil stencil = DerivativeStencil::centered_difference;

  std::size_t size() const { return static_cast<std::size_t>(grid.size()); }
  // Rows within this distance of either end are excluded from residual norms.
  std::size_t edge_rows() const;
};

GridOperatorPair build_trend_operator(
    std::size_t grid_size, double beta0, double d,
    DerivativeStencil stencil = DerivativeStencil::centered_difference);

// max |T_ij - conj(T_ji)| over the interior block.
double hermiticity_residual(const GridOperatorPair& pair);

// || ([P, T] - i (1 + beta0 T^2)) psi || / || psi || restricted to interior
// rows. The commutator is formed entrywise as (x_i - x_j) T_ij.
double commutator_residual(const GridOperatorPair& pair, const Eigen::VectorXcd& test_state);

}  // namespace gupmarket
