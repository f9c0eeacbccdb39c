#include "edgeflow/model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace edgeflow {

void PhysicalParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("PhysicalParams: " + msg); };
  if (!(B > 0.0)) fail("B must be positive");
  if (!(w >= 0.0)) fail("w must be nonnegative");
  if (!(B > 2.0 * w)) {
    std::ostringstream os;
    os << "strong-field regime requires B > 2w (B=" << B << ", w=" << w << ")";
    fail(os.str());
  }
  if (!(epsilon > 0.0 && epsilon < 0.5 * B - w)) fail("epsilon must satisfy 0 < epsilon < B/2 - w");
  if (!(delta > 0.0 && delta < 0.5 * B - w - epsilon)) fail("delta must satisfy 0 < delta < B/2 - w - epsilon");
  if (!(gamma >= 2.0)) fail("gamma must be >= 2");
  if (!(u > 0.0)) fail("u must be positive");
  if (!(L > 0.0)) fail("L must be positive");
}

std::pair<EnergyWindow, EnergyWindow> gap_window(const PhysicalParams& p) {
  p.validate();
  EnergyWindow g0t{0.5 * p.B + p.w + p.epsilon, 1.5 * p.B - p.w - p.epsilon};
  EnergyWindow delta{p.B - p.delta, p.B + p.delta};
  return {g0t, delta};
}

double wall_potential(const PhysicalParams& p, double x) {
  if (x <= 0.0) return 0.0;
  return p.u * std::pow(x, p.gamma);
}

int GridSpec::nx() const {
  int steps = static_cast<int>(std::lround((x_max - x_min) / hx));
  return steps - 1;
}

void GridSpec::validate(double B, double L) const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("GridSpec: " + msg); };
  if (!(x_min < 0.0 && x_max > 0.0)) fail("domain must straddle the wall foot: x_min < 0 < x_max");
  if (!(hx > 0.0)) fail("hx must be positive");
  if (ny < 8) fail("ny must be at least 8");
  double hmax = 1.0 / (4.0 * std::sqrt(B));
  if (hx > hmax * (1.0 + 1e-12)) fail("hx exceeds 1/(4 sqrt(B)); refine the x grid");
  if (hy(L) > hmax * (1.0 + 1e-12)) fail("hy = L/ny exceeds 1/(4 sqrt(B)); increase ny");
  if (nx() < 4) fail("fewer than 4 interior x sites");
}

DisorderField sample_disorder(std::uint64_t seed, const GridSpec& grid, double w) {
  if (w < 0.0) throw std::invalid_argument("sample_disorder: w must be nonnegative");
  const int nx = grid.nx();
  const int ny = grid.ny;
  DisorderField field;
  field.seed = seed;
  field.values = Eigen::ArrayXXd::Zero(nx, ny);
  std::mt19937_64 rng(seed);
  // Explicit 53-bit mapping to [-w, w]; uniform_real_distribution is
  // implementation defined and would break bit-for-bit reproducibility.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (grid.x(i) > 0.0) continue; // impurities vanish beyond the wall foot
      double u01 = static_cast<double>(rng() >> 11) * 0x1p-53;
      field.values(i, j) = w * (2.0 * u01 - 1.0);
    }
  return field;
}

} // namespace edgeflow
