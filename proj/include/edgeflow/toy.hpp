#pragma once

#include <Eigen/Dense>
#include <vector>

// Exact chiral ring model: h(Phi) = (-i d/dy + Phi/L) + v(y) on a circle of
// circumference L. Closed-form spectrum, used as the analytic oracle for
// flow, spacing, winding and conductance.

namespace edgeflow {

struct ToySpectrum {
  int m_lo = 0;
  int m_hi = 0;
  double L = 1.0;
  double v_bar = 0.0; // (1/L) integral of v(y)
  double phi = 0.0;

  // e_m(Phi) = 2 pi m / L + Phi / L + v_bar.
  double level(int m) const;
  Eigen::VectorXd levels() const; // ascending, m = m_lo .. m_hi
  double flow_rate() const { return 1.0 / L; } // d e_m / d Phi, every branch
  double spacing() const;                      // exactly 2 pi / L
};

ToySpectrum toy_spectrum(int m_lo, int m_hi, double L, double v_bar, double phi);

// Number of toy branches crossing e_F as Phi goes 0 -> 2 pi: always 1 for
// any e_F inside the swept range.
int toy_crossing_count(const ToySpectrum& at_phi0, double e_F);

// Flux-averaged edge conductance of the toy model over a window: branch
// sweeps tile the energy axis, so the clipped sum telescopes to 1/(2 pi).
double toy_edge_conductance(const ToySpectrum& at_phi0, double window_lo, double window_hi);

// Upwind one-sided discretization of h(Phi) with the flux phase on the
// periodic wrap; returns max |Re lambda - e_m| over the low modes |m| <= 2,
// which converges under grid refinement for smooth v.
double toy_numeric_check(double L, const std::vector<double>& v_samples, int n_sites,
                         double phi = 0.0);

} // namespace edgeflow
