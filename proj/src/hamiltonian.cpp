#include "edgeflow/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace edgeflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

HermitianMatrix HermitianMatrix::from_dense(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: matrix must be square");
  SparseCd s = m.sparseView();
  s.makeCompressed();
  return HermitianMatrix(std::move(s), static_cast<int>(m.rows()), 1);
}

double HermitianMatrix::hermiticity_error() const {
  SparseCd diff = SparseCd(mat_.adjoint()) - mat_;
  double dev = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCd::InnerIterator it(diff, k); it; ++it)
      dev = std::max(dev, std::abs(it.value()));
  return dev;
}

void HermitianMatrix::write_triplets(std::ostream& os) const {
  for (int k = 0; k < mat_.outerSize(); ++k)
    for (SparseCd::InnerIterator it(mat_, k); it; ++it) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value().real(), it.value().imag());
      os << buf;
    }
}

HermitianMatrix build_hamiltonian(const PhysicalParams& p, const GridSpec& grid,
                                  const DisorderField& disorder, double phi) {
  const int nx = grid.nx();
  const int ny = grid.ny;
  if (disorder.values.rows() != nx || disorder.values.cols() != ny)
    throw std::invalid_argument("build_hamiltonian: disorder shape does not match the grid");
  const double hx = grid.hx;
  const double hy = grid.hy(p.L);
  const double tx = 0.5 / (hx * hx);
  const double ty = 0.5 / (hy * hy);
  const int n = nx * ny;

  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  auto idx = [nx](int i, int j) { return j * nx + i; };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = grid.x(i);
      const double onsite = 2.0 * tx + 2.0 * ty + wall_potential(p, x) + disorder.values(i, j);
      trip.emplace_back(idx(i, j), idx(i, j), cd(onsite, 0.0));
      if (i + 1 < nx) {
        trip.emplace_back(idx(i, j), idx(i + 1, j), cd(-tx, 0.0));
        trip.emplace_back(idx(i + 1, j), idx(i, j), cd(-tx, 0.0));
      }
      // Peierls phase on the +y bond, periodic wrap included.
      const int jp = (j + 1) % ny;
      const cd hop = -ty * std::polar(1.0, -hy * (p.B * x - phi / p.L));
      trip.emplace_back(idx(i, jp), idx(i, j), hop);
      trip.emplace_back(idx(i, j), idx(i, jp), std::conj(hop));
    }
  }
  SparseCd H(n, n);
  H.setFromTriplets(trip.begin(), trip.end());
  H.makeCompressed();
  return HermitianMatrix(std::move(H), nx, ny);
}

SparseCd build_hamiltonian_dphi(const PhysicalParams& p, const GridSpec& grid, double phi) {
  const int nx = grid.nx();
  const int ny = grid.ny;
  const double hy = grid.hy(p.L);
  const double ty = 0.5 / (hy * hy);
  const int n = nx * ny;

  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 2);
  auto idx = [nx](int i, int j) { return j * nx + i; };
  const cd scale(0.0, hy / p.L);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = grid.x(i);
      const int jp = (j + 1) % ny;
      const cd hop = scale * (-ty * std::polar(1.0, -hy * (p.B * x - phi / p.L)));
      trip.emplace_back(idx(i, jp), idx(i, j), hop);
      trip.emplace_back(idx(i, j), idx(i, jp), std::conj(hop));
    }
  }
  SparseCd D(n, n);
  D.setFromTriplets(trip.begin(), trip.end());
  D.makeCompressed();
  return D;
}

double gauge_shift_check(const HermitianMatrix& Ha, const HermitianMatrix& Hb,
                         const GridSpec& grid, double L, int winding) {
  if (Ha.rows() != Hb.rows()) throw std::invalid_argument("gauge_shift_check: dimension mismatch");
  const int nx = grid.nx();
  const int ny = Ha.ny();
  const double hy = grid.hy(L);
  Eigen::VectorXcd u(Ha.rows());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      u[j * nx + i] = std::polar(1.0, kTwoPi * winding * (j * hy) / L);

  // U^dagger Ha U - Hb, entrywise max. |u| = 1 so U^dagger is conjugation.
  Eigen::VectorXcd uc = u.conjugate();
  SparseCd conj_a = uc.asDiagonal() * Ha.matrix() * u.asDiagonal();
  SparseCd diff = conj_a - Hb.matrix();
  double dev = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCd::InnerIterator it(diff, k); it; ++it)
      dev = std::max(dev, std::abs(it.value()));
  return dev;
}

Eigen::VectorXd Tridiagonal1D::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Tridiagonal1D build_edge_1d(const PhysicalParams& p, const GridSpec& grid, double k) {
  const int nx = grid.nx();
  const double hx = grid.hx;
  const double tx = 0.5 / (hx * hx);
  Tridiagonal1D t;
  t.diag.resize(nx);
  t.off = Eigen::VectorXd::Constant(nx - 1, -tx);
  for (int i = 0; i < nx; ++i) {
    const double x = grid.x(i);
    const double q = k - p.B * x;
    t.diag[i] = 2.0 * tx + 0.5 * q * q + wall_potential(p, x);
  }
  return t;
}

Tridiagonal1D build_edge_fiber(const PhysicalParams& p, const GridSpec& grid,
                               double hy, double k_total) {
  const int nx = grid.nx();
  const double hx = grid.hx;
  const double tx = 0.5 / (hx * hx);
  Tridiagonal1D t;
  t.diag.resize(nx);
  t.off = Eigen::VectorXd::Constant(nx - 1, -tx);
  for (int i = 0; i < nx; ++i) {
    const double x = grid.x(i);
    const double q = k_total - p.B * x;
    t.diag[i] = 2.0 * tx + (1.0 - std::cos(hy * q)) / (hy * hy) + wall_potential(p, x);
  }
  return t;
}

DisorderField truncate_disorder(const DisorderField& disorder, const GridSpec& grid, double D) {
  if (D < 0.0) throw std::invalid_argument("truncate_disorder: D must be nonnegative");
  DisorderField out = disorder;
  for (int i = 0; i < out.values.rows(); ++i)
    if (grid.x(i) > -D) out.values.row(i).setZero();
  return out;
}

} // namespace edgeflow
