#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "edgeflow/index.hpp"

using namespace edgeflow;

namespace {
Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unif = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5; };
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cd(unif(), unif());
  return 0.5 * (A + A.adjoint());
}

Projection diag_projection(int dim, int rank) {
  Projection p;
  p.P = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < rank; ++i) p.P(i, i) = 1.0;
  p.source = "diagonal";
  return p;
}
} // namespace

TEST_CASE("spectral projection of a diagonal matrix") {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(3, 3);
  H(1, 1) = 1.0;
  H(2, 2) = 2.0;
  Projection p = spectral_projection(H, 0.5);
  CHECK_NOTHROW(p.validate());
  CHECK(p.rank() == 1);
  CHECK(std::abs(p.P(0, 0) - cd(1.0, 0.0)) <= 1e-14);
  CHECK(std::abs(p.P(1, 1)) <= 1e-14);
  // E_F below the whole spectrum: the zero projection.
  CHECK(spectral_projection(H, -1.0).rank() == 0);
}

TEST_CASE("spectral projection at the median of a random Hermitian matrix") {
  Eigen::MatrixXcd H = random_hermitian(50, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  const double median = 0.5 * (es.eigenvalues()[24] + es.eigenvalues()[25]);
  Projection p = spectral_projection(H, median);
  CHECK(p.rank() == 25);
  CHECK((p.P * p.P - p.P).norm() <= 1e-12);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("spectral projection refuses a Fermi level on an eigenvalue") {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2, 2);
  H(1, 1) = 1.0;
  CHECK_THROWS_AS(spectral_projection(H, 1.0 + 1e-12), std::invalid_argument);
}

TEST_CASE("projection validation catches frauds") {
  Projection bad;
  bad.P = Eigen::MatrixXcd::Zero(3, 3);
  bad.P(0, 0) = 0.5; // eigenvalue not in {0, 1}
  bad.source = "half";
  CHECK_THROWS(bad.validate());
  Projection skew;
  skew.P = Eigen::MatrixXcd::Zero(2, 2);
  skew.P(0, 1) = cd(0.0, 1e-6);
  skew.source = "non-hermitian";
  CHECK_THROWS(skew.validate());
}

TEST_CASE("relative index is rank difference") {
  CHECK(relative_index(diag_projection(8, 3), diag_projection(8, 3)) == 0);
  CHECK(relative_index(diag_projection(8, 3), diag_projection(8, 5)) == -2);
  CHECK(relative_index(diag_projection(8, 5), diag_projection(8, 3)) == 2);
  CHECK_THROWS(relative_index(diag_projection(8, 3), diag_projection(9, 3)));
}

TEST_CASE("relative index counts levels between two Fermi energies") {
  Eigen::MatrixXcd H = random_hermitian(30, 5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  const double e1 = 0.5 * (es.eigenvalues()[9] + es.eigenvalues()[10]);
  const double e2 = 0.5 * (es.eigenvalues()[17] + es.eigenvalues()[18]);
  // Eigenvalues in ]e1, e2]: indices 10..17, eight of them.
  CHECK(relative_index(spectral_projection(H, e1), spectral_projection(H, e2)) == -8);
}

TEST_CASE("index identities hold on 100 randomized triples") {
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    ProjectionTriple tr = random_projection_triple(16, 1000 + t);
    CHECK_NOTHROW(tr.P.validate());
    if (!index_identities_check(tr.P, tr.Q, tr.R, tr.U).all()) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("unitary conjugation preserves the index, identity trivially") {
  ProjectionTriple tr = random_projection_triple(12, 99);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(12, 12);
  IndexIdentityReport rep = index_identities_check(tr.P, tr.Q, tr.R, I);
  CHECK(rep.unitary_invariance);
  CHECK(rep.antisymmetry);
  // Conjugating only one argument shifts nothing either: same ranks.
  Projection Pu{tr.U * tr.P.P * tr.U.adjoint(), "conjugated"};
  CHECK(relative_index(Pu, tr.P) == 0);
}

TEST_CASE("crossing projector trace agrees with the branch count") {
  // Synthetic branch set: two rising branches spanning the sweep, one of
  // which crosses the Fermi level, plus one artificial-wall branch that
  // would cross downward and must be ignored.
  BranchSet bs;
  bs.phi = Eigen::VectorXd::LinSpaced(65, 0.0, 2.0 * std::numbers::pi);
  bs.delta = {0.9, 1.1};
  bs.L = 20.0;
  bs.B = 1.0;
  auto make = [&](double e0, double de, int basis, double lw) {
    Branch b;
    b.start = 0;
    for (int q = 0; q < 65; ++q) {
      b.energy.push_back(e0 + de * q / 64.0);
      b.current.push_back(de / bs.dphi() / 64.0);
    }
    b.psi_first = Eigen::VectorXcd::Zero(8);
    b.psi_first[basis] = 1.0;
    b.psi_last = b.psi_first;
    b.left_weight = lw;
    return b;
  };
  bs.branches.push_back(make(0.95, 0.12, 0, 0.0));  // crosses 1.0 upward
  bs.branches.push_back(make(1.02, 0.12, 1, 0.0));  // stays above
  bs.branches.push_back(make(1.06, -0.12, 2, 0.9)); // artificial, downward
  CrossingIndexResult r = crossing_vs_index(bs, 1.0);
  CHECK(r.q_branches == 1);
  CHECK(r.q_index == 1);
  CHECK(r.equal);
  CHECK(r.gram_error <= 1e-14);
  // A Fermi level below every branch crosses nothing.
  CrossingIndexResult r0 = crossing_vs_index(bs, 0.93);
  CHECK(r0.q_branches == 0);
  CHECK(r0.q_index == 0);
  CHECK(r0.equal);
}

TEST_CASE("decoupling with zero disorder is exactly zero deviation") {
  PhysicalParams p;
  p.L = 8.0;
  GridSpec g;
  g.x_min = -6.0;
  g.x_max = 2.0;
  g.hx = 0.25;
  g.ny = 32;
  DisorderField d = sample_disorder(1, g, 0.0);
  DecouplingResult r = decoupling_compare(p, g, d, {1.0, 2.0}, 0.0,
                                          EnergyWindow{0.8, 1.2});
  for (const DecouplingPoint& pt : r.points) {
    CHECK(pt.direct_dev <= 1e-12);
    CHECK(pt.first_order_dev == 0.0);
    CHECK(pt.projector_dev <= 1e-6); // sqrt(1 - |<psi|psi>|^2) amplifies roundoff
  }
}

TEST_CASE("decoupling input validation") {
  PhysicalParams p;
  GridSpec g;
  DisorderField d = sample_disorder(1, g, 0.0);
  CHECK_THROWS(decoupling_compare(p, g, d, {}, 0.0, EnergyWindow{0.8, 1.2}));
  CHECK_THROWS(decoupling_compare(p, g, d, {2.0, 1.0}, 0.0, EnergyWindow{0.8, 1.2}));
  CHECK_THROWS(decoupling_compare(p, g, d, {1.0}, 0.0, EnergyWindow{1.2, 0.8}));
}
