#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "edgeflow/eigensolve.hpp"
#include "edgeflow/hamiltonian.hpp"
#include "edgeflow/model.hpp"
#include "edgeflow/spectra.hpp"

// Flux sweeps over [0, 2 pi], eigenvector-overlap branch tracking, and the
// derived checks: flow-rate bounds, the label-shift identity, crossing
// counts, level-spacing statistics and the edge conductance.

namespace edgeflow {

struct Branch {
  int start = 0;               // first flux index where the branch appears
  std::vector<double> energy;  // one entry per tracked flux point
  std::vector<double> current; // <psi|dH/dPhi|psi> at the same points
  Eigen::VectorXcd psi_first;  // eigenvector at the first tracked point
  Eigen::VectorXcd psi_last;   // eigenvector at the last tracked point
  // Max over tracked points of the probability on the inner half of the
  // x grid. The truncation at x_min is an artificial wall carrying its own
  // counter-propagating gap states; states bound there have weight near 1,
  // genuine wall states near 0, and the analysis keeps only the latter.
  double left_weight = 0.0;

  int last() const { return start + static_cast<int>(energy.size()) - 1; }
  bool spans(int n_phi) const { return start == 0 && last() == n_phi - 1; }
  bool artificial() const { return left_weight > 0.5; }
};

struct BranchSet {
  Eigen::VectorXd phi; // phi_steps + 1 points, 0 .. 2 pi inclusive
  std::vector<Branch> branches;
  EnergyWindow delta;      // analysis window
  EnergyWindow delta_plus; // widened tracking window actually solved
  double L = 0.0;
  double B = 0.0;
  double min_overlap = 1.0; // smallest accepted matching overlap
  std::vector<std::pair<int, double>> near_degeneracies; // (flux index, energy)

  int n_phi() const { return static_cast<int>(phi.size()); }
  double dphi() const { return phi[1] - phi[0]; }
};

// Eigenpairs in the widened window Delta^+ (Delta grown by 2 pi sqrt(3B)/L
// per side, clamped to the gap window G0t) at each flux point; branches
// matched between consecutive points by maximal eigenvector overlap.
// threads > 1 solves flux points concurrently; results merge in flux order.
BranchSet sweep_flux(const PhysicalParams& p, const GridSpec& grid,
                     const DisorderField& disorder, int phi_steps,
                     const EnergyWindow& delta, const EigenOptions& opts = {},
                     int threads = 1);

// Feynman-Hellmann current of one eigenstate.
double branch_current(const Eigen::VectorXcd& psi, const SparseCd& dH_dphi);

struct FlowBoundResult {
  double min_rate = 0.0; // min over in-window points of L dE/dPhi
  double max_rate = 0.0;
  bool pass = false;
};

// Finite-difference flow rates restricted to points with E in Delta;
// pass iff min > 0 and, when alpha is non-vacuous, min >= alpha (1 - rel_tol).
FlowBoundResult verify_flow_bound(const BranchSet& bs, const AlphaBound& alpha,
                                  double rel_tol = 0.05);

// Max over full-sweep branches meeting Delta of |E_k(2 pi) - E_{k+1}(0)|,
// the label-shift residual; throws if a qualifying branch has no successor
// level at Phi = 0 inside the tracking window.
double verify_spectral_shift(const BranchSet& bs);

// Branches crossing E_F as Phi goes 0 -> 2 pi (signed count of sign changes;
// all upward under the flow bound). Throws if E_F sits on an endpoint
// eigenvalue; move it by half a mean spacing.
int crossing_count(const BranchSet& bs, double e_F);

struct SpacingStats {
  std::vector<double> levels;       // Phi = 0 levels in the tracked window
  std::vector<double> spacings;     // consecutive differences of the above
  std::vector<double> s;            // spacings over a 5-gap local mean
  std::vector<int> histogram;       // 30 bins on [0, 3]
  double bin_width = 0.1;
  bool bounds_ok = true;            // bracket holds for every pair inside Delta
  double lower_bound = 0.0;         // 2 pi alpha / L (0 when alpha vacuous)
  double upper_bound = 0.0;         // 2 pi sqrt(3B) / L
};

SpacingStats spacing_stats(const BranchSet& bs, const AlphaBound& alpha,
                           double rel_tol = 0.05);

struct Conductance {
  double sigma_e = 0.0;     // clipped branch sweeps over 2 pi |Delta|
  double correction = 0.0;  // boundary-branch overshoot, O(1/L)
  int branches_in_window = 0;
};

Conductance edge_conductance(const BranchSet& bs);

// Max over branches and interior points of |FH current - centered dE/dPhi|.
double feynman_hellmann_check(const BranchSet& bs);

} // namespace edgeflow
