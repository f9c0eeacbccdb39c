#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "edgeflow/toy.hpp"

using namespace edgeflow;
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("toy levels: closed form, exact spacing and flow rate") {
  ToySpectrum s = toy_spectrum(0, 3, kTwoPi, 0.0, 0.0); // L = 2 pi: e_m = m
  Eigen::VectorXd lv = s.levels();
  REQUIRE(lv.size() == 4);
  for (int m = 0; m <= 3; ++m) CHECK(lv[m] == doctest::Approx(m).epsilon(1e-15));
  CHECK(s.spacing() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.flow_rate() == doctest::Approx(1.0 / kTwoPi).epsilon(1e-15));
}

TEST_CASE("toy levels depend on the potential only through its mean") {
  ToySpectrum a = toy_spectrum(-3, 3, 11.0, 0.7, 1.2);
  ToySpectrum b = toy_spectrum(-3, 3, 11.0, 0.7, 1.2);
  CHECK((a.levels() - b.levels()).cwiseAbs().maxCoeff() == 0.0);
  // Closed form: e_m = 2 pi m / L + phi / L + v_bar.
  for (int m = -3; m <= 3; ++m)
    CHECK(a.level(m) ==
          doctest::Approx(kTwoPi * m / 11.0 + 1.2 / 11.0 + 0.7).epsilon(1e-15));
}

TEST_CASE("full flux period shifts the toy labels by exactly one") {
  ToySpectrum s0 = toy_spectrum(-5, 5, 20.0, 0.3, 0.0);
  ToySpectrum s1 = toy_spectrum(-5, 5, 20.0, 0.3, kTwoPi);
  for (int m = -5; m < 5; ++m)
    CHECK(s1.level(m) == doctest::Approx(s0.level(m + 1)).epsilon(1e-15));
}

TEST_CASE("unit winding for any Fermi level inside a swept interval") {
  ToySpectrum s = toy_spectrum(-10, 10, 20.0, 0.3, 0.0);
  for (double t : {0.1, 0.37, 0.5, 0.93})
    CHECK(toy_crossing_count(s, s.level(0) + t * s.spacing()) == 1);
  // Outside the swept range nothing crosses.
  CHECK(toy_crossing_count(s, s.level(10) + 2.0 * s.spacing()) == 0);
}

TEST_CASE("toy conductance is exactly 1/(2 pi) for covered windows") {
  ToySpectrum s = toy_spectrum(-20, 20, 20.0, 0.0, 0.0);
  // Branch sweeps tile the axis, so any window inside the covered range
  // gives the quantized value with zero error.
  for (double a : {-1.0, -0.3, 0.11})
    for (double wdt : {0.05, 0.7, 1.9}) {
      const double sigma = toy_edge_conductance(s, a, a + wdt);
      CHECK(std::abs(sigma - 1.0 / kTwoPi) <= 1e-12);
    }
}

TEST_CASE("rescaled toy spacings are identically one") {
  ToySpectrum s = toy_spectrum(-8, 8, 13.0, 0.45, 2.2);
  Eigen::VectorXd lv = s.levels();
  for (int i = 0; i + 1 < lv.size(); ++i) {
    const double spacing = lv[i + 1] - lv[i];
    CHECK(spacing / s.spacing() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("upwind discretization converges to the exact spectrum") {
  const double L = 20.0;
  double prev = 1e300;
  for (int n : {64, 256}) {
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = 0.3 + 0.2 * std::sin(kTwoPi * j / n);
    const double err = toy_numeric_check(L, v, n, 0.9);
    CHECK(err < 0.02);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("toy validation rejects bad ranges") {
  CHECK_THROWS(toy_spectrum(3, 1, 20.0, 0.0, 0.0));
  CHECK_THROWS(toy_spectrum(0, 1, -1.0, 0.0, 0.0));
  CHECK_THROWS(toy_edge_conductance(toy_spectrum(0, 1, 20.0, 0.0, 0.0), 1.0, 0.5));
  std::vector<double> v(16, 0.0);
  CHECK_THROWS(toy_numeric_check(20.0, v, 16));
}
