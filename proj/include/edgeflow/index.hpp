#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "edgeflow/eigensolve.hpp"
#include "edgeflow/flow.hpp"
#include "edgeflow/model.hpp"

// Relative index of projection pairs and the truncated-disorder decoupling
// comparison: the crossing count of the flux sweep equals the trace of the
// projector onto the crossing states.

namespace edgeflow {

struct Projection {
  Eigen::MatrixXcd P;
  std::string source; // which Hamiltonian / Fermi level produced it

  int dim() const { return static_cast<int>(P.rows()); }
  int rank() const; // rounded trace
  // Throws unless ||P^2 - P|| <= 1e-10, ||P - P^dag|| <= 1e-12 and every
  // eigenvalue is within 1e-8 of {0, 1}.
  void validate() const;
};

// Sum of eigenprojectors of H with eigenvalue <= e_F. Throws if e_F sits
// within 10 x residual_tol of an eigenvalue, naming the offending level.
Projection spectral_projection(const Eigen::MatrixXcd& H, double e_F,
                               double residual_tol = 1e-10);

// Tr(P - Q) rounded to the nearest integer; throws if the trace is farther
// than 1e-6 from an integer (signals invalid projections).
int relative_index(const Projection& P, const Projection& Q);

struct IndexIdentityReport {
  bool additivity = false;         // ind(P,R) == ind(P,Q) + ind(Q,R)
  bool antisymmetry = false;       // ind(P,Q) == -ind(Q,P)
  bool unitary_invariance = false; // ind(UPU*, UQU*) == ind(P,Q)

  bool all() const { return additivity && antisymmetry && unitary_invariance; }
};

IndexIdentityReport index_identities_check(const Projection& P, const Projection& Q,
                                           const Projection& R, const Eigen::MatrixXcd& U);

// Deterministic random projection triple plus a random unitary on C^dim,
// built from one Hermitian matrix cut at three Fermi levels.
struct ProjectionTriple {
  Projection P, Q, R;
  Eigen::MatrixXcd U;
};
ProjectionTriple random_projection_triple(int dim, std::uint64_t seed);

struct CrossingIndexResult {
  int q_branches = 0;   // signed crossing count from the branch sweep
  int q_index = 0;      // rounded Tr of the crossing-state projector
  double gram_error = 0.0; // || Gram - I || over the crossing states
  bool equal = false;
};

// Builds the projector onto the Phi=0 states of branches that start below
// e_F and end above it. Its trace is evaluated through the Gram matrix so
// the full n x n projector is never formed.
CrossingIndexResult crossing_vs_index(const BranchSet& bs, double e_F);

struct DecouplingPoint {
  double D = 0.0;
  double direct_dev = 0.0;      // max matched |E(H_D) - E(H_e)| in the window
  double first_order_dev = 0.0; // max <psi_e| V_D |psi_e>, cancellation-free
  double hybrid_dev = 0.0;      // direct when resolvable, first-order tail else
  double projector_dev = 0.0;   // ||P_D - P_e|| for the mid-window level
};

struct DecouplingResult {
  std::vector<DecouplingPoint> points;
  double fit_slope = 0.0; // least-squares slope of log(hybrid_dev) vs D
  bool monotone = false;  // hybrid_dev strictly decreasing in D
};

// H_e is the clean edge Hamiltonian (disorder off), H_D = H_e + V_D with the
// disorder kept only at x <= -D. Window states living at the artificial
// truncation wall are discarded; the rest are matched by eigenvector overlap.
// Below the direct resolution floor the deviation switches to the first-order
// tail expectation, which stays strictly positive and decreasing.
DecouplingResult decoupling_compare(const PhysicalParams& p, const GridSpec& grid,
                                    const DisorderField& disorder,
                                    const std::vector<double>& D_values, double phi,
                                    const EnergyWindow& window,
                                    const EigenOptions& opts = {});

} // namespace edgeflow
