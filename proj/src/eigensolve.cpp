#include "edgeflow/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace edgeflow {

void dense_hermitian_eig(const Eigen::MatrixXcd& H, Eigen::VectorXd& values,
                         Eigen::MatrixXcd& vectors) {
  const lapack_int n = static_cast<lapack_int>(H.rows());
  vectors = H;
  values.resize(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                   reinterpret_cast<lapack_complex_double*>(vectors.data()), n,
                                   values.data());
  if (info != 0) {
    std::ostringstream os;
    os << "dense_hermitian_eig: zheevd failed, info=" << info;
    throw std::runtime_error(os.str());
  }
}

int inertia_below(const SparseCd& H, double e) {
  const int n = static_cast<int>(H.rows());
  double shift = e;
  for (int attempt = 0; attempt < 3; ++attempt) {
    SparseCd A = H;
    for (int k = 0; k < n; ++k) A.coeffRef(k, k) -= cd(shift, 0.0);
    Eigen::SimplicialLDLT<SparseCd, Eigen::Lower> ldlt;
    ldlt.compute(A);
    if (ldlt.info() == Eigen::Success) {
      const auto& d = ldlt.vectorD();
      bool ok = true;
      int neg = 0;
      for (int k = 0; k < n; ++k) {
        double dk = std::real(d(k));
        if (!std::isfinite(dk) || dk == 0.0) { ok = false; break; }
        if (dk < 0.0) ++neg;
      }
      if (ok) return neg;
    }
    shift = e + (attempt + 1) * 1e-9 * (1.0 + std::abs(e));
  }
  throw std::runtime_error("inertia_below: LDLT factorization failed at the window edge");
}

namespace {

EigenPairs dense_window(const HermitianMatrix& H, const EnergyWindow& window) {
  Eigen::MatrixXcd dense(H.matrix());
  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;
  dense_hermitian_eig(dense, vals, vecs);
  std::vector<int> keep;
  for (int i = 0; i < vals.size(); ++i)
    if (window.contains(vals[i])) keep.push_back(i);
  EigenPairs out;
  out.window = window;
  out.values.resize(keep.size());
  out.vectors.resize(dense.rows(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.values[i] = vals[keep[i]];
    out.vectors.col(i) = vecs.col(keep[i]);
  }
  return out;
}

Eigen::VectorXcd seeded_unit_vector(int n, std::mt19937_64& rng) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    double a = static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;
    double b = static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;
    v[i] = cd(a, b);
  }
  v.normalize();
  return v;
}

EigenPairs lanczos_window(const HermitianMatrix& H, const EnergyWindow& window,
                          const EigenOptions& opts) {
  const int n = H.rows();
  const SparseCd& A = H.matrix();

  const int want = inertia_below(A, window.hi) - inertia_below(A, window.lo);
  EigenPairs out;
  out.window = window;
  if (want == 0) {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    return out;
  }

  const double sigma = window.center();
  SparseCd shifted = A;
  for (int k = 0; k < n; ++k) shifted.coeffRef(k, k) -= cd(sigma, 0.0);
  Eigen::SparseLU<SparseCd> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("eigen_window: sparse LU factorization of the shifted operator failed");

  const int cap = std::min(n, opts.max_iterations);
  std::mt19937_64 rng(opts.lanczos_seed);

  Eigen::MatrixXcd V(n, cap);
  std::vector<double> alpha, beta; // T entries; beta[j] couples j and j+1
  V.col(0) = seeded_unit_vector(n, rng);

  // Convergence target for Ritz residuals of the shift-inverted operator:
  // an A-residual rho gives an H eigenvalue error of about rho/theta^2 with
  // |theta| >= 2/width for values inside the window.
  const double half_width = 0.5 * window.width();
  const double a_tol = opts.residual_tol / (half_width * half_width);

  int j = 0;
  std::vector<double> theta;
  Eigen::MatrixXd tvecs;
  auto t_eigen = [&](int m) {
    Eigen::Map<const Eigen::VectorXd> da(alpha.data(), m);
    Eigen::VectorXd db(m > 1 ? m - 1 : 0);
    for (int i = 0; i + 1 < m; ++i) db[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(da, db, Eigen::ComputeEigenvectors);
    theta.assign(es.eigenvalues().data(), es.eigenvalues().data() + m);
    tvecs = es.eigenvectors();
  };

  bool converged = false;
  while (j < cap) {
    Eigen::VectorXcd w = lu.solve(V.col(j));
    const double aj = std::real(V.col(j).dot(w));
    alpha.push_back(aj);
    w -= aj * V.col(j);
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
    double bj = w.norm();
    const int m = j + 1;

    bool check_now = (m % 10 == 0) || m == cap || m == n || bj < 1e-13;
    if (check_now) {
      t_eigen(m);
      int good = 0, found = 0;
      for (int i = 0; i < m; ++i) {
        if (theta[i] == 0.0) continue;
        double lambda = sigma + 1.0 / theta[i];
        if (!window.contains(lambda)) continue;
        ++found;
        if (bj * std::abs(tvecs(m - 1, i)) <= a_tol) ++good;
      }
      if (found >= want && good >= want) { converged = true; break; }
      if (m == n) break; // exhausted the space; final filtering decides
    }

    if (j + 1 >= cap) break;
    if (bj < 1e-13) {
      // Invariant subspace exhausted; continue from a fresh direction.
      Eigen::VectorXcd f = seeded_unit_vector(n, rng);
      for (int pass = 0; pass < 2; ++pass)
        f -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * f);
      double fn = f.norm();
      if (fn < 1e-8) break;
      beta.push_back(0.0);
      V.col(j + 1) = f / fn;
    } else {
      beta.push_back(bj);
      V.col(j + 1) = w / bj;
    }
    ++j;
  }

  const int m = static_cast<int>(alpha.size());
  t_eigen(m);

  // Assemble in-window Ritz pairs, orthonormalize, refine by Rayleigh quotient.
  std::vector<int> sel;
  for (int i = 0; i < m; ++i) {
    if (theta[i] == 0.0) continue;
    double lambda = sigma + 1.0 / theta[i];
    // Slightly widened acceptance; the final filter re-applies the window.
    if (lambda > window.lo - 1e-9 && lambda < window.hi + 1e-9) sel.push_back(i);
  }
  Eigen::MatrixXcd U(n, sel.size());
  for (std::size_t i = 0; i < sel.size(); ++i)
    U.col(i) = V.leftCols(m) * tvecs.col(sel[i]).cast<cd>();
  if (U.cols() > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(U);
    U = qr.householderQ() * Eigen::MatrixXcd::Identity(n, U.cols());
  }

  std::vector<std::pair<double, int>> refined;
  const double h_norm_est = [&] {
    double s = 0.0;
    for (int k = 0; k < A.outerSize(); ++k) {
      double row = 0.0;
      for (SparseCd::InnerIterator it(A, k); it; ++it) row += std::abs(it.value());
      s = std::max(s, row);
    }
    return s;
  }();
  for (int i = 0; i < U.cols(); ++i) {
    Eigen::VectorXcd hu = A * U.col(i);
    double lambda = std::real(U.col(i).dot(hu));
    double resid = (hu - lambda * U.col(i)).norm();
    if (!window.contains(lambda)) continue;
    if (resid > 10.0 * opts.residual_tol * std::max(1.0, h_norm_est)) continue;
    refined.emplace_back(lambda, i);
  }
  std::sort(refined.begin(), refined.end());

  if (static_cast<int>(refined.size()) != want) {
    std::ostringstream os;
    os << "eigen_window: Lanczos found " << refined.size() << " eigenvalues in ]"
       << window.lo << ", " << window.hi << "[ but the inertia count demands " << want
       << (converged ? "" : " (iteration cap reached)")
       << "; increase max_iterations or shrink the window";
    throw std::runtime_error(os.str());
  }

  out.values.resize(want);
  out.vectors.resize(n, want);
  for (int i = 0; i < want; ++i) {
    out.values[i] = refined[i].first;
    out.vectors.col(i) = U.col(refined[i].second);
  }
  return out;
}

} // namespace

EigenPairs eigen_window(const HermitianMatrix& H, const EnergyWindow& window,
                        const EigenOptions& opts) {
  if (window.lo >= window.hi) throw std::invalid_argument("eigen_window: empty window");
  if (!opts.force_sparse && H.rows() <= opts.dense_limit) return dense_window(H, window);
  return lanczos_window(H, window, opts);
}

} // namespace edgeflow
