#include "edgeflow/toy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace edgeflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double ToySpectrum::level(int m) const { return kTwoPi * m / L + phi / L + v_bar; }

Eigen::VectorXd ToySpectrum::levels() const {
  Eigen::VectorXd out(m_hi - m_lo + 1);
  for (int m = m_lo; m <= m_hi; ++m) out[m - m_lo] = level(m);
  return out;
}

double ToySpectrum::spacing() const { return kTwoPi / L; }

ToySpectrum toy_spectrum(int m_lo, int m_hi, double L, double v_bar, double phi) {
  if (m_lo > m_hi) throw std::invalid_argument("toy_spectrum: m_lo must not exceed m_hi");
  if (!(L > 0.0)) throw std::invalid_argument("toy_spectrum: L must be positive");
  return {m_lo, m_hi, L, v_bar, phi};
}

int toy_crossing_count(const ToySpectrum& s, double e_F) {
  int count = 0;
  for (int m = s.m_lo; m <= s.m_hi; ++m) {
    const double e0 = s.level(m);
    const double e1 = e0 + kTwoPi / s.L; // e_m(2 pi) = e_{m+1}(0)
    if (e0 < e_F && e_F < e1) ++count;
  }
  return count;
}

double toy_edge_conductance(const ToySpectrum& s, double window_lo, double window_hi) {
  if (!(window_hi > window_lo))
    throw std::invalid_argument("toy_edge_conductance: empty window");
  double swept = 0.0;
  for (int m = s.m_lo; m <= s.m_hi; ++m) {
    const double e0 = s.level(m);
    const double e1 = e0 + kTwoPi / s.L;
    swept += std::max(0.0, std::min(e1, window_hi) - std::max(e0, window_lo));
  }
  return swept / (kTwoPi * (window_hi - window_lo));
}

double toy_numeric_check(double L, const std::vector<double>& v_samples, int n_sites,
                         double phi) {
  if (n_sites < 32) throw std::invalid_argument("toy_numeric_check: n_sites must be >= 32");
  if (static_cast<int>(v_samples.size()) != n_sites)
    throw std::invalid_argument("toy_numeric_check: v_samples size must equal n_sites");
  const double h = L / n_sites;
  const std::complex<double> i1(0.0, 1.0);
  const std::complex<double> hop = -i1 * std::exp(i1 * (h * phi / L)) / h;

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n_sites, n_sites);
  for (int j = 0; j < n_sites; ++j) {
    M(j, j) = v_samples[j] + i1 / h;
    M(j, (j + 1) % n_sites) = hop;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  Eigen::VectorXd re = es.eigenvalues().real();
  std::sort(re.data(), re.data() + re.size());

  double v_bar = 0.0;
  for (double v : v_samples) v_bar += v;
  v_bar /= n_sites;

  // Only the slowly varying modes track the continuum dispersion; compare a
  // fixed band of exact levels around zero momentum against the nearest
  // numeric eigenvalue so refinement shrinks the error.
  const int m_cut = 2;
  double worst = 0.0;
  for (int m = -m_cut; m <= m_cut; ++m) {
    const double exact = kTwoPi * m / L + phi / L + v_bar;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < re.size(); ++j) best = std::min(best, std::abs(re[j] - exact));
    worst = std::max(worst, best);
  }
  return worst;
}

} // namespace edgeflow
