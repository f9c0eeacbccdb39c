#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <iosfwd>

#include "edgeflow/model.hpp"

// Discretized Hermitian operators: the flux-threaded cylinder Hamiltonian
// H(Phi), the clean 1D fibered operator h_k, and truncated-disorder
// variants. Matrices are immutable once built; construction is pure.

namespace edgeflow {

using cd = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<cd>;

class HermitianMatrix {
public:
  HermitianMatrix() = default;
  HermitianMatrix(SparseCd m, int nx, int ny) : mat_(std::move(m)), nx_(nx), ny_(ny) {}

  static HermitianMatrix from_dense(const Eigen::MatrixXcd& m);

  int rows() const { return static_cast<int>(mat_.rows()); }
  const SparseCd& matrix() const { return mat_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  // Site index map: column-fast in x, y-major.
  int site(int i, int j) const { return j * nx_ + i; }

  double hermiticity_error() const; // max |H - H^dagger|
  // Sparse triplet text format "row col re im", one entry per line.
  void write_triplets(std::ostream& os) const;

private:
  SparseCd mat_;
  int nx_ = 0, ny_ = 0;
};

// 5-point finite-difference discretization of
//   H(Phi) = p_x^2/2 + (p_y - B x + Phi/L)^2/2 + W(x) + V(x,y)
// with Dirichlet walls in x and Peierls phases exp(-i hy (B x_i - Phi/L))
// on each +y bond (periodic wrap in y).
HermitianMatrix build_hamiltonian(const PhysicalParams& p, const GridSpec& grid,
                                  const DisorderField& disorder, double phi);

// Analytic dH/dPhi: the +y bond entries scaled by i*hy/L, diagonal zero.
SparseCd build_hamiltonian_dphi(const PhysicalParams& p, const GridSpec& grid, double phi);

// Conjugates Ha by the diagonal unitary exp(2 pi i winding y_j / L) and
// returns the max entrywise deviation from Hb. With Ha = H(Phi + 2 pi),
// Hb = H(Phi) and winding = 1 this is an exact lattice identity.
double gauge_shift_check(const HermitianMatrix& Ha, const HermitianMatrix& Hb,
                         const GridSpec& grid, double L, int winding = 1);

struct Tridiagonal1D {
  Eigen::VectorXd diag;
  Eigen::VectorXd off; // size nx-1

  Eigen::VectorXd eigenvalues() const;
};

// h_k = p_x^2/2 + (k - B x)^2/2 + W(x) on the interior x grid, Dirichlet ends.
Tridiagonal1D build_edge_1d(const PhysicalParams& p, const GridSpec& grid, double k);

// Exact y-momentum fiber of the discrete 2D clean Hamiltonian: the y-kinetic
// term becomes (1 - cos(hy (k - B x + Phi/L)))/hy^2. Test oracle for clean
// flux sweeps; k_total = 2 pi m / L + Phi/L.
Tridiagonal1D build_edge_fiber(const PhysicalParams& p, const GridSpec& grid,
                               double hy, double k_total);

// V_D: keeps V where x <= -D, zero elsewhere.
DisorderField truncate_disorder(const DisorderField& disorder, const GridSpec& grid, double D);

} // namespace edgeflow
