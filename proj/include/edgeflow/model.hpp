#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

// Physical parameters, confining wall, disorder field and energy windows
// shared by every other module. All types here are immutable after
// construction and safe to share across workers.

namespace edgeflow {

struct PhysicalParams {
  double B = 1.0;        // magnetic field strength, magnetic length 1/sqrt(B)
  double w = 0.0;        // disorder amplitude bound
  double L = 20.0;       // cylinder circumference
  double gamma = 2.0;    // wall exponent, >= 2
  double u = 1.0;        // wall coefficient, W(x) = u x^gamma for x > 0
  double epsilon = 0.05; // gap margin
  double delta = 0.05;   // window half-width

  // Throws std::invalid_argument on violation of
  //   B > 2w, 0 < epsilon < B/2 - w, 0 < delta < B/2 - w - epsilon,
  //   gamma >= 2, u > 0, L > 0.
  void validate() const;
};

struct EnergyWindow {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double e) const { return e > lo && e < hi; }
};

// Returns (G0t, Delta) where G0t = ]B/2+w+eps, 3B/2-w-eps[ and
// Delta = ]B-delta, B+delta[. Validates the parameters first.
std::pair<EnergyWindow, EnergyWindow> gap_window(const PhysicalParams& p);

// W(x) = 0 for x <= 0, u x^gamma for x > 0.
double wall_potential(const PhysicalParams& p, double x);

struct GridSpec {
  double x_min = -12.0;
  double x_max = 2.5;
  double hx = 0.25;
  int ny = 80;

  // Number of interior x sites (Dirichlet walls at x_min and x_max).
  int nx() const;
  // Position of interior site i, i in [0, nx).
  double x(int i) const { return x_min + (i + 1) * hx; }
  double hy(double L) const { return L / ny; }

  // Resolution rule hx, hy <= 1/(4 sqrt(B)): at least four points per
  // magnetic length. Throws std::invalid_argument if violated.
  void validate(double B, double L) const;
};

struct DisorderField {
  std::uint64_t seed = 0;
  Eigen::ArrayXXd values; // nx x ny, per-site energies

  double max_abs() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
};

// I.i.d. uniform on [-w, w] at each site with x <= 0, exactly zero for
// x > 0. Identical seed and grid give a bit-identical field.
DisorderField sample_disorder(std::uint64_t seed, const GridSpec& grid, double w);

} // namespace edgeflow
