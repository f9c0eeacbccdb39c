#include "edgeflow/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace edgeflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double interp(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double xq) {
  const int n = static_cast<int>(xs.size());
  if (xq < xs[0] || xq > xs[n - 1]) {
    std::ostringstream os;
    os << "BranchTable: query k=" << xq << " outside the table range [" << xs[0] << ", "
       << xs[n - 1] << "]";
    throw std::out_of_range(os.str());
  }
  const double* begin = xs.data();
  int i = static_cast<int>(std::upper_bound(begin, begin + n, xq) - begin) - 1;
  i = std::clamp(i, 0, n - 2);
  const double t = (xq - xs[i]) / (xs[i + 1] - xs[i]);
  return (1.0 - t) * ys[i] + t * ys[i + 1];
}
} // namespace

double BranchTable::eps0(double kq) const { return interp(k, eps.row(0).transpose(), kq); }
double BranchTable::eps0_prime(double kq) const { return interp(k, deps0, kq); }

BranchTable edge_branches(const PhysicalParams& p, const GridSpec& grid,
                          const Eigen::VectorXd& k_grid, int n_max) {
  const int nk = static_cast<int>(k_grid.size());
  if (nk < 3) throw std::invalid_argument("edge_branches: k grid needs at least 3 points");
  BranchTable table;
  table.k = k_grid;
  table.eps.resize(n_max + 1, nk);
  for (int ik = 0; ik < nk; ++ik) {
    Eigen::VectorXd ev = build_edge_1d(p, grid, k_grid[ik]).eigenvalues();
    for (int n = 0; n <= n_max; ++n) table.eps(n, ik) = ev[n];
  }
  table.deps0.resize(nk);
  for (int ik = 0; ik < nk; ++ik) {
    const int lo = std::max(0, ik - 1), hi = std::min(nk - 1, ik + 1);
    table.deps0[ik] = (table.eps(0, hi) - table.eps(0, lo)) / (k_grid[hi] - k_grid[lo]);
  }
  return table;
}

FermiVelocity fermi_velocity(const BranchTable& table, const EnergyWindow& delta_window,
                             double L, double phi) {
  const double B = delta_window.center();
  const double delta = 0.5 * delta_window.width();
  const double k_lo = table.k[0], k_hi = table.k[table.k.size() - 1];

  // Branch points k_m = 2 pi m / L + phi / L on the table range.
  const int m_min = static_cast<int>(std::ceil((k_lo - phi / L) * L / kTwoPi));
  const int m_max = static_cast<int>(std::floor((k_hi - phi / L) * L / kTwoPi));
  auto k_of = [&](int m) { return kTwoPi * m / L + phi / L; };

  int best_m = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int m = m_min; m <= m_max; ++m) {
    const double e = table.eps0(k_of(m));
    if (!delta_window.contains(e)) continue;
    // The Dirichlet cut at x_min bends the far-left tail of eps_0 back up,
    // so the table can cross Delta a second time with negative slope. Those
    // crossings belong to the artificial wall, not the edge dispersion.
    if (table.eps0_prime(k_of(m)) <= 0.0) continue;
    const double d = std::abs(e - B);
    if (d < best_dist) { best_dist = d; best_m = m; }
  }
  if (!std::isfinite(best_dist))
    throw std::runtime_error(
        "fermi_velocity: no branch point of eps_0 falls inside Delta; "
        "refine the k grid or re-center the window");

  const double e_ref = table.eps0(k_of(best_m));
  const double threshold = 0.5 * B - 2.0 * delta;
  for (int m_bar = 1;; ++m_bar) {
    const int lo = best_m - m_bar, hi = best_m + m_bar;
    if (k_of(lo) < k_lo || k_of(hi) > k_hi) {
      throw std::out_of_range(
          "fermi_velocity: k grid too short to host the momentum band; extend it");
    }
    const double a = std::min(std::abs(table.eps0(k_of(lo)) - e_ref),
                              std::abs(table.eps0(k_of(hi)) - e_ref));
    if (a < threshold) continue;
    double v = std::numeric_limits<double>::infinity();
    for (int m = lo; m <= hi; ++m) v = std::min(v, table.eps0_prime(k_of(m)));
    return {best_m, m_bar, v};
  }
}

AlphaBound alpha_over_flux(const BranchTable& table, const EnergyWindow& delta_window,
                           double L, double w, int phi_samples) {
  if (phi_samples < 1) throw std::invalid_argument("alpha_over_flux: phi_samples must be >= 1");
  const double B = delta_window.center();
  const double delta = 0.5 * delta_window.width();
  double v_min = std::numeric_limits<double>::infinity();
  for (int s = 0; s < phi_samples; ++s) {
    try {
      v_min = std::min(v_min,
                       fermi_velocity(table, delta_window, L, kTwoPi * s / phi_samples).v_F);
    } catch (const std::runtime_error&) {
      // No branch point in Delta at this flux; the next flux shifts them.
    }
  }
  if (!std::isfinite(v_min))
    throw std::runtime_error(
        "alpha_over_flux: no flux value brings a branch point into Delta; "
        "the k grid is too short or Delta is misplaced");
  return alpha_bound(v_min, B, w, delta);
}

AlphaBound alpha_bound(double v_F, double B, double w, double delta) {
  if (!(v_F > 0.0)) throw std::invalid_argument("alpha_bound: v_F must be positive");
  const double denom = 0.5 * B - 2.0 * delta;
  if (!(denom > 0.0)) return {0.0, true};
  const double bracket = 1.0 - 2.0 * (1.0 + std::sqrt(3.0 * B) / v_F) * (w * w) / (denom * denom);
  if (bracket <= 0.0) return {0.0, true};
  return {v_F * bracket, false};
}

} // namespace edgeflow
