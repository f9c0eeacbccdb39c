#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "edgeflow/model.hpp"

using namespace edgeflow;

TEST_CASE("parameter validation accepts the reference regime") {
  PhysicalParams p; // B=1, w=0 defaults
  CHECK_NOTHROW(p.validate());
  p.w = 0.02;
  p.delta = 0.05;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter validation rejects weak fields and bad windows") {
  PhysicalParams p;
  p.w = 0.6; // violates B > 2w at B = 1
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.w = 0.0;
  p.epsilon = 0.5; // epsilon must stay below B/2 - w
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.epsilon = 0.05;
  p.delta = 0.46; // delta must stay below B/2 - w - epsilon
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.delta = 0.05;
  p.gamma = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("gap windows at B=1, w=0.05, eps=0.05, delta=0.2") {
  PhysicalParams p;
  p.w = 0.05;
  p.epsilon = 0.05;
  p.delta = 0.2;
  auto [g0t, delta] = gap_window(p);
  CHECK(g0t.lo == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(g0t.hi == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(delta.lo == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(delta.hi == doctest::Approx(1.2).epsilon(1e-15));
  // Delta nested inside the gap window, both centered at B.
  CHECK(delta.lo > g0t.lo);
  CHECK(delta.hi < g0t.hi);
  CHECK(delta.center() == doctest::Approx(p.B));
  CHECK(g0t.center() == doctest::Approx(p.B));
}

TEST_CASE("wall potential: zero on the bulk side, u x^gamma beyond the foot") {
  PhysicalParams p;
  p.u = 0.5;
  p.gamma = 3.0;
  CHECK(wall_potential(p, -4.0) == 0.0);
  CHECK(wall_potential(p, 0.0) == 0.0);
  CHECK(wall_potential(p, 1.5) == doctest::Approx(1.6875).epsilon(1e-15));
  // Monotone increasing past the foot.
  double prev = 0.0;
  for (double x = 0.1; x < 3.0; x += 0.1) {
    double v = wall_potential(p, x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("grid geometry: interior sites and spacings") {
  GridSpec g; // x_min=-12, x_max=2.5, hx=0.25, ny=80
  CHECK(g.nx() == 57);
  CHECK(g.x(0) == doctest::Approx(-11.75));
  CHECK(g.x(g.nx() - 1) == doctest::Approx(2.25));
  CHECK(g.hy(20.0) == doctest::Approx(0.25));
  CHECK_NOTHROW(g.validate(1.0, 20.0));
}

TEST_CASE("grid validation enforces the four-points-per-magnetic-length rule") {
  GridSpec g;
  CHECK_THROWS_AS(g.validate(4.0, 20.0), std::invalid_argument); // hx too coarse at B=4
  g.ny = 40;                                                     // hy = 0.5 at L=20
  CHECK_THROWS_AS(g.validate(1.0, 20.0), std::invalid_argument);
  g.ny = 7;
  CHECK_THROWS_AS(g.validate(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("disorder: bounded, zero beyond the wall foot, seed-deterministic") {
  GridSpec g;
  DisorderField a = sample_disorder(42, g, 0.05);
  DisorderField b = sample_disorder(42, g, 0.05);
  DisorderField c = sample_disorder(43, g, 0.05);
  CHECK((a.values == b.values).all());
  CHECK(!(a.values == c.values).all());
  CHECK(a.max_abs() <= 0.05);
  CHECK(a.max_abs() > 0.0);
  for (int i = 0; i < g.nx(); ++i)
    if (g.x(i) > 0.0)
      for (int j = 0; j < g.ny; ++j) CHECK(a.values(i, j) == 0.0);
}

TEST_CASE("disorder with w=0 is identically zero") {
  GridSpec g;
  DisorderField d = sample_disorder(7, g, 0.0);
  CHECK(d.max_abs() == 0.0);
}
