#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "edgeflow/io.hpp"

using namespace edgeflow;

TEST_CASE("config round-trips through JSON unchanged") {
  RunConfig c;
  c.params.w = 0.02;
  c.params.L = 40.0;
  c.grid.ny = 160;
  c.seed = 7;
  c.phi_steps = 128;
  c.D_values = {1.5, 3.0, 4.5};
  c.decouple_window = {0.85, 1.15};
  c.toy_v_bar = 0.25;
  RunConfig d = config_from_json(config_to_json(c));
  CHECK(config_to_json(d) == config_to_json(c));
}

TEST_CASE("partial configs inherit defaults") {
  RunConfig c = config_from_json(nlohmann::json::parse(R"({"params":{"w":0.01}})"));
  CHECK(c.params.w == 0.01);
  CHECK(c.params.B == 1.0);
  CHECK(c.grid.ny == 80);
  CHECK(c.phi_steps == 128);
}

TEST_CASE("config validation rejects out-of-regime parameters") {
  RunConfig c;
  c.params.w = 0.6;
  CHECK_THROWS(c.validate());
  c = RunConfig{};
  c.phi_steps = 8;
  CHECK_THROWS(c.validate());
  c = RunConfig{};
  c.D_values = {2.0, 2.0};
  CHECK_THROWS(c.validate());
  CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("float formatting survives a round trip at full precision") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-13, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("branch table CSV layout") {
  BranchTable t;
  t.k = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  t.eps.resize(2, 3);
  t.eps << 1, 2, 3, 4, 5, 6;
  t.deps0 = Eigen::VectorXd::Constant(3, 2.0);
  std::ostringstream os;
  write_branch_table_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,eps0,eps1,deps0");
  std::getline(is, line);
  CHECK(line == "0,1,4,2");
}

TEST_CASE("sweep CSV leaves the derivative blank at branch endpoints") {
  BranchSet bs;
  bs.phi = Eigen::VectorXd::LinSpaced(4, 0.0, 3.0);
  Branch b;
  b.start = 0;
  b.energy = {1.0, 1.1, 1.25, 1.3};
  b.current = {0.1, 0.1, 0.1, 0.1};
  bs.branches.push_back(b);
  std::ostringstream os;
  write_sweep_csv(os, bs);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "branch,start,left_weight,phi_index,phi,E,j,dEdPhi_fd");
  std::getline(is, line);
  CHECK(line.back() == ','); // first point: no centered difference
  std::getline(is, line);
  CHECK(line.substr(line.rfind(',') + 1) == format_double((1.25 - 1.0) / 2.0));
}

TEST_CASE("decoupling CSV carries all deviation flavors") {
  DecouplingResult r;
  r.points.push_back({2.0, 1e-3, 2e-3, 1e-3, 0.1});
  r.points.push_back({4.0, 1e-7, 5e-8, 1e-7, 0.01});
  std::ostringstream os;
  write_decoupling_csv(os, r);
  CHECK(os.str().find("D,direct_dev,first_order_dev,hybrid_dev,projector_dev") == 0);
  CHECK(os.str().find(format_double(5e-8)) != std::string::npos);
}

TEST_CASE("identical inputs give byte-identical artifacts") {
  SpacingStats st;
  st.levels = {1.0, 1.1, 1.3};
  st.spacings = {0.1, 0.2};
  st.s = {0.8, 1.2};
  st.histogram.assign(30, 0);
  st.histogram[8] = 1;
  st.histogram[11] = 1;
  std::ostringstream a, b;
  write_spacing_csv(a, st);
  write_spacing_csv(b, st);
  CHECK(a.str() == b.str());
  std::ostringstream ha, hb;
  write_histogram_csv(ha, st);
  write_histogram_csv(hb, st);
  CHECK(ha.str() == hb.str());
}
