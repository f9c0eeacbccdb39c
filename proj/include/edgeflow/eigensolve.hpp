#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "edgeflow/hamiltonian.hpp"
#include "edgeflow/model.hpp"

// Windowed Hermitian eigen-solving. Small matrices go through a dense
// LAPACK decomposition; larger ones through shift-invert Lanczos with the
// eigenvalue count inside the window pinned by LDLT inertia, so no
// eigenvalue is ever silently dropped.

namespace edgeflow {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending, all inside the window
  Eigen::MatrixXcd vectors; // orthonormal columns, one per value
  EnergyWindow window;

  int count() const { return static_cast<int>(values.size()); }
};

struct EigenOptions {
  int dense_limit = 1200;          // dense path for n <= dense_limit
  double residual_tol = 1e-10;     // absolute Ritz residual target
  std::uint64_t lanczos_seed = 0x5eedf10dULL;
  int max_iterations = 1200;       // hard cap on the Lanczos basis
  bool force_sparse = false;       // test hook: exercise the Lanczos path
};

// Full dense eigendecomposition (LAPACK zheevd), ascending values.
void dense_hermitian_eig(const Eigen::MatrixXcd& H, Eigen::VectorXd& values,
                         Eigen::MatrixXcd& vectors);

// Number of eigenvalues of H strictly below e (Sylvester inertia of H - e I).
int inertia_below(const SparseCd& H, double e);

// All eigenpairs of H strictly inside the open window. Throws
// std::runtime_error if the iteration cannot converge every eigenvalue the
// inertia count demands.
EigenPairs eigen_window(const HermitianMatrix& H, const EnergyWindow& window,
                        const EigenOptions& opts = {});

} // namespace edgeflow
