#pragma once

#include <Eigen/Dense>

#include "edgeflow/hamiltonian.hpp"
#include "edgeflow/model.hpp"

// Clean-edge dispersion branches eps_n(k), the Fermi velocity over a
// momentum band, and the theoretical lower bound on the spectral-flow rate.

namespace edgeflow {

struct BranchTable {
  Eigen::VectorXd k;      // ascending momentum grid
  Eigen::MatrixXd eps;    // (n_max+1) x |k|, row n is eps_n(k)
  Eigen::VectorXd deps0;  // centered-difference eps_0'(k) on the same grid

  int n_branches() const { return static_cast<int>(eps.rows()); }
  // Linear interpolation inside the table range; throws outside it.
  double eps0(double kq) const;
  double eps0_prime(double kq) const;
};

BranchTable edge_branches(const PhysicalParams& p, const GridSpec& grid,
                          const Eigen::VectorXd& k_grid, int n_max);

struct FermiVelocity {
  int M = 0;       // branch index with eps_0(2 pi M / L + phi / L) nearest the window center
  int m_bar = 0;   // band half-width in units of 2 pi / L
  double v_F = 0;  // min eps_0' over the band
};

// Picks M with eps_0 nearest the center of Delta, then the smallest band
// half-width m_bar for which both band-edge energies sit at distance at
// least B/2 - 2 delta from the reference energy. Throws if no branch point
// lands in Delta or the table cannot host the band.
FermiVelocity fermi_velocity(const BranchTable& table, const EnergyWindow& delta_window,
                             double L, double phi);

struct AlphaBound {
  double alpha = 0.0;
  bool vacuous = false; // bracket <= 0: the bound carries no information
};

// alpha = v_F [1 - 2 (1 + sqrt(3B)/v_F) w^2 / (B/2 - 2 delta)^2].
AlphaBound alpha_bound(double v_F, double B, double w, double delta);

// The branch points move with the flux, so Delta may be empty of them at one
// flux value and populated at another. Evaluates fermi_velocity on a uniform
// flux grid, skips points where Delta holds no branch point, and returns the
// alpha of the smallest admissible v_F. Throws if every flux point fails.
AlphaBound alpha_over_flux(const BranchTable& table, const EnergyWindow& delta_window,
                           double L, double w, int phi_samples = 32);

} // namespace edgeflow
