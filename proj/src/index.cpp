#include "edgeflow/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace edgeflow {

namespace {
constexpr double kIdempotencyTol = 1e-10;
constexpr double kHermiticityTol = 1e-12;
constexpr double kBinarySpectrumTol = 1e-8;
constexpr double kDirectFloor = 1e-9; // below this the eigensolver noise dominates
} // namespace

int Projection::rank() const { return static_cast<int>(std::lround(P.trace().real())); }

void Projection::validate() const {
  const double herm = (P - P.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermiticityTol) {
    std::ostringstream os;
    os << "Projection(" << source << "): hermiticity defect " << herm;
    throw std::runtime_error(os.str());
  }
  const double idem = (P * P - P).norm();
  if (idem > kIdempotencyTol) {
    std::ostringstream os;
    os << "Projection(" << source << "): idempotency defect " << idem;
    throw std::runtime_error(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P, Eigen::EigenvaluesOnly);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double e = es.eigenvalues()[i];
    if (std::min(std::abs(e), std::abs(e - 1.0)) > kBinarySpectrumTol) {
      std::ostringstream os;
      os << "Projection(" << source << "): eigenvalue " << e << " not in {0,1}";
      throw std::runtime_error(os.str());
    }
  }
}

Projection spectral_projection(const Eigen::MatrixXcd& H, double e_F, double residual_tol) {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  dense_hermitian_eig(H, values, vectors);
  const double guard = 10.0 * residual_tol;
  for (int i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - e_F) < guard) {
      std::ostringstream os;
      os << "spectral_projection: E_F=" << e_F << " within " << guard
         << " of eigenvalue " << values[i] << " (index " << i << ")";
      throw std::invalid_argument(os.str());
    }
  }
  Projection out;
  out.P = Eigen::MatrixXcd::Zero(H.rows(), H.cols());
  std::ostringstream src;
  src << "H[" << H.rows() << "x" << H.cols() << "] @ E_F=" << e_F;
  out.source = src.str();
  for (int i = 0; i < values.size(); ++i)
    if (values[i] <= e_F) out.P += vectors.col(i) * vectors.col(i).adjoint();
  return out;
}

int relative_index(const Projection& P, const Projection& Q) {
  if (P.dim() != Q.dim())
    throw std::invalid_argument("relative_index: dimension mismatch");
  const double tr = (P.P - Q.P).trace().real();
  const double rounded = std::round(tr);
  if (std::abs(tr - rounded) > 1e-6) {
    std::ostringstream os;
    os << "relative_index: Tr(P-Q)=" << tr << " is not an integer; "
       << "inputs are not valid projections";
    throw std::runtime_error(os.str());
  }
  return static_cast<int>(rounded);
}

IndexIdentityReport index_identities_check(const Projection& P, const Projection& Q,
                                           const Projection& R, const Eigen::MatrixXcd& U) {
  IndexIdentityReport rep;
  const int pq = relative_index(P, Q);
  const int qr = relative_index(Q, R);
  const int pr = relative_index(P, R);
  rep.additivity = (pr == pq + qr);
  rep.antisymmetry = (relative_index(Q, P) == -pq);
  Projection Pu{U * P.P * U.adjoint(), P.source + " (conjugated)"};
  Projection Qu{U * Q.P * U.adjoint(), Q.source + " (conjugated)"};
  rep.unitary_invariance = (relative_index(Pu, Qu) == pq);
  return rep;
}

ProjectionTriple random_projection_triple(int dim, std::uint64_t seed) {
  if (dim < 4) throw std::invalid_argument("random_projection_triple: dim must be >= 4");
  std::mt19937_64 rng(seed);
  auto unif = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };

  Eigen::MatrixXcd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = cd(unif(), unif());
  Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());

  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  dense_hermitian_eig(H, values, vectors);
  // Three Fermi levels at distinct interior spectral gaps.
  std::uniform_int_distribution<int> cut(1, dim - 2);
  auto project_at = [&](int n_below, const char* name) {
    Projection p;
    p.P = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < n_below; ++i) p.P += vectors.col(i) * vectors.col(i).adjoint();
    p.source = name;
    return p;
  };
  ProjectionTriple t;
  t.P = project_at(cut(rng), "random P");
  t.Q = project_at(cut(rng), "random Q");
  t.R = project_at(cut(rng), "random R");

  // Random unitary: QR of a second complex Gaussian-ish matrix.
  Eigen::MatrixXcd G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = cd(unif(), unif());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  t.U = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  return t;
}

CrossingIndexResult crossing_vs_index(const BranchSet& bs, double e_F) {
  CrossingIndexResult r;
  r.q_branches = crossing_count(bs, e_F);

  std::vector<const Branch*> crossing;
  for (const Branch& b : bs.branches)
    if (!b.artificial() && b.spans(bs.n_phi()) && b.energy.front() < e_F &&
        b.energy.back() > e_F)
      crossing.push_back(&b);

  const int m = static_cast<int>(crossing.size());
  if (m == 0) {
    r.q_index = 0;
    r.equal = (r.q_branches == 0);
    return r;
  }
  Eigen::MatrixXcd gram(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      gram(a, b) = crossing[a]->psi_first.dot(crossing[b]->psi_first);
  r.gram_error = (gram - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (r.gram_error > kBinarySpectrumTol)
    throw std::runtime_error(
        "crossing_vs_index: crossing states are not orthonormal; the sum of "
        "their eigenprojectors is not a projection");
  r.q_index = static_cast<int>(std::lround(gram.trace().real()));
  r.equal = (r.q_index == r.q_branches);
  return r;
}

DecouplingResult decoupling_compare(const PhysicalParams& p, const GridSpec& grid,
                                    const DisorderField& disorder,
                                    const std::vector<double>& D_values, double phi,
                                    const EnergyWindow& window, const EigenOptions& opts) {
  if (D_values.empty()) throw std::invalid_argument("decoupling_compare: no D values");
  for (std::size_t i = 0; i + 1 < D_values.size(); ++i)
    if (D_values[i + 1] <= D_values[i])
      throw std::invalid_argument("decoupling_compare: D values must be increasing");
  if (!(window.width() > 0.0)) throw std::invalid_argument("decoupling_compare: empty window");

  DisorderField clean{disorder.seed, Eigen::ArrayXXd::Zero(disorder.values.rows(),
                                                           disorder.values.cols())};
  HermitianMatrix He = build_hamiltonian(p, grid, clean, phi);
  EigenPairs ref = eigen_window(He, window, opts);
  if (ref.count() == 0)
    throw std::runtime_error("decoupling_compare: no clean levels in the window");

  // Keep only reference states living at the physical wall. States bound to
  // the artificial truncation at x_min sit inside the support of every V_D
  // and would hide the decay this comparison is after.
  const int nx = grid.nx();
  const double x_cut = 0.5 * grid.x_min;
  std::vector<int> keep;
  for (int i = 0; i < ref.count(); ++i) {
    double left = 0.0;
    for (int idx = 0; idx < ref.vectors.rows(); ++idx)
      if (grid.x(idx % nx) < x_cut) left += std::norm(ref.vectors(idx, i));
    if (left < 0.5) keep.push_back(i);
  }
  if (keep.empty())
    throw std::runtime_error("decoupling_compare: no wall states in the window");
  const int mid = keep[keep.size() / 2];

  DecouplingResult out;
  for (double D : D_values) {
    DisorderField tail = truncate_disorder(disorder, grid, D);
    HermitianMatrix Hd = build_hamiltonian(p, grid, tail, phi);
    EigenPairs dev = eigen_window(Hd, window, opts);

    DecouplingPoint pt;
    pt.D = D;
    for (int i : keep) {
      // Match by eigenvector overlap: wall states barely move while states at
      // the truncation wall shift at O(w), so proximity in energy alone could
      // pair a wall level with the wrong partner.
      double best_ov = 0.0;
      int best_j = -1;
      for (int j = 0; j < dev.count(); ++j) {
        const double ov = std::abs(dev.vectors.col(j).dot(ref.vectors.col(i)));
        if (ov > best_ov) { best_ov = ov; best_j = j; }
      }
      if (best_j < 0)
        throw std::runtime_error("decoupling_compare: window emptied under truncation");
      pt.direct_dev = std::max(pt.direct_dev, std::abs(dev.values[best_j] - ref.values[i]));

      double fo = 0.0;
      const Eigen::VectorXcd& psi = ref.vectors.col(i);
      for (int xi = 0; xi < tail.values.rows(); ++xi)
        for (int yj = 0; yj < tail.values.cols(); ++yj)
          if (tail.values(xi, yj) != 0.0)
            fo += std::abs(tail.values(xi, yj)) * std::norm(psi[He.site(xi, yj)]);
      pt.first_order_dev = std::max(pt.first_order_dev, fo);

      if (i == mid)
        pt.projector_dev = std::sqrt(std::max(0.0, 1.0 - best_ov * best_ov));
    }
    pt.hybrid_dev = pt.direct_dev > kDirectFloor ? pt.direct_dev : pt.first_order_dev;
    out.points.push_back(pt);
  }

  out.monotone = true;
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i)
    if (!(out.points[i + 1].hybrid_dev < out.points[i].hybrid_dev)) out.monotone = false;

  // Log-linear fit of the hybrid deviation against D.
  const int n = static_cast<int>(out.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const DecouplingPoint& pt : out.points) {
    const double y = std::log(std::max(pt.hybrid_dev, 1e-300));
    sx += pt.D; sy += y; sxx += pt.D * pt.D; sxy += pt.D * y;
  }
  out.fit_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

} // namespace edgeflow
