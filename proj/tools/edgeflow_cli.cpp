#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "edgeflow/flow.hpp"
#include "edgeflow/index.hpp"
#include "edgeflow/io.hpp"
#include "edgeflow/spectra.hpp"
#include "edgeflow/toy.hpp"

// Batch front-end. Every subcommand writes its artifacts plus a resolved
// config echo into --out; exit status is nonzero iff an asserted invariant
// fails or a solver cannot converge.

namespace {

using namespace edgeflow;
namespace fs = std::filesystem;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> phi_steps;
  std::optional<int> threads;
};

RunConfig resolve(const CommonOpts& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.phi_steps) c.phi_steps = *o.phi_steps;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

void echo_config(const RunConfig& c, const fs::path& out) {
  fs::create_directories(out);
  std::ofstream os(out / "config.json");
  os << config_to_json(c).dump(2) << '\n';
}

void write_report(const nlohmann::json& j, const fs::path& out) {
  std::ofstream os(out / "report.json");
  os << j.dump(2) << '\n';
}

BranchSet run_sweep(const RunConfig& c) {
  DisorderField dis = sample_disorder(c.seed, c.grid, c.params.w);
  auto [g0t, delta] = gap_window(c.params);
  (void)g0t;
  return sweep_flux(c.params, c.grid, dis, c.phi_steps, delta, {}, c.threads);
}

AlphaBound alpha_for(const RunConfig& c) {
  const int nk = static_cast<int>((c.k_max - c.k_min) / c.k_step) + 1;
  Eigen::VectorXd ks(nk);
  for (int i = 0; i < nk; ++i) ks[i] = c.k_min + i * c.k_step;
  BranchTable table = edge_branches(c.params, c.grid, ks, 0);
  auto [g0t, delta] = gap_window(c.params);
  (void)g0t;
  return alpha_over_flux(table, delta, c.params.L, c.params.w);
}

int cmd_branches(const RunConfig& c, const fs::path& out) {
  const int nk = static_cast<int>((c.k_max - c.k_min) / c.k_step) + 1;
  Eigen::VectorXd ks(nk);
  for (int i = 0; i < nk; ++i) ks[i] = c.k_min + i * c.k_step;
  BranchTable table = edge_branches(c.params, c.grid, ks, c.n_max);
  {
    std::ofstream os(out / "branch_table.csv");
    write_branch_table_csv(os, table);
  }
  // A violation is a decrease beyond roundoff (scaled for the eigensolver); the Landau tail is flat to
  // machine precision and must not count.
  int violations = 0;
  for (int n = 0; n < table.n_branches(); ++n)
    for (int ik = 0; ik + 1 < nk; ++ik)
      if (table.eps(n, ik + 1) < table.eps(n, ik) - 1e-10) ++violations;
  nlohmann::json rep;
  rep["monotonicity_violations"] = violations;
  rep["eps0_left_limit"] = table.eps(0, 0);
  write_report(rep, out);
  if (violations > 0) {
    std::cerr << "branches: " << violations << " monotonicity violations\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(const RunConfig& c, const fs::path& out) {
  BranchSet bs = run_sweep(c);
  {
    std::ofstream os(out / "branches.csv");
    write_sweep_csv(os, bs);
  }
  AlphaBound alpha = alpha_for(c);
  FlowBoundResult fb = verify_flow_bound(bs, alpha);
  const double shift = verify_spectral_shift(bs);
  const double fh = feynman_hellmann_check(bs);
  const double vmax = std::sqrt(3.0 * c.params.B);

  nlohmann::json rep;
  rep["alpha"] = alpha.alpha;
  rep["alpha_vacuous"] = alpha.vacuous;
  rep["min_flow_rate"] = fb.min_rate;
  rep["max_flow_rate"] = fb.max_rate;
  rep["flow_bound_pass"] = fb.pass;
  rep["velocity_bound_pass"] = fb.max_rate <= vmax * 1.05;
  rep["spectral_shift_residual"] = shift;
  rep["feynman_hellmann_residual"] = fh;
  rep["min_tracking_overlap"] = bs.min_overlap;
  rep["near_degeneracies"] = bs.near_degeneracies.size();
  write_report(rep, out);

  bool ok = fb.pass && fb.max_rate <= vmax * 1.05 && shift <= 1e-7 * c.params.B;
  if (!ok) std::cerr << "sweep: flow/shift invariants failed (see report.json)\n";
  return ok ? 0 : 1;
}

int cmd_spacing(const RunConfig& c, const fs::path& out) {
  BranchSet bs = run_sweep(c);
  SpacingStats st = spacing_stats(bs, alpha_for(c));
  {
    std::ofstream os(out / "spacings.csv");
    write_spacing_csv(os, st);
  }
  {
    std::ofstream os(out / "histogram.csv");
    write_histogram_csv(os, st);
  }
  nlohmann::json rep;
  rep["levels_in_window"] = st.levels.size();
  rep["lower_bound"] = st.lower_bound;
  rep["upper_bound"] = st.upper_bound;
  rep["bounds_ok"] = st.bounds_ok;
  write_report(rep, out);
  if (!st.bounds_ok) std::cerr << "spacing: a spacing violates the theorem bracket\n";
  return st.bounds_ok ? 0 : 1;
}

int cmd_conductance(const RunConfig& c, const fs::path& out) {
  BranchSet bs = run_sweep(c);
  Conductance cond = edge_conductance(bs);
  const double err = std::abs(cond.sigma_e - 1.0 / kTwoPi);
  nlohmann::json rep;
  rep["sigma_e"] = cond.sigma_e;
  rep["correction"] = cond.correction;
  rep["branches_in_window"] = cond.branches_in_window;
  rep["quantization_error"] = err;
  rep["quantization_pass"] = err <= 2.0 / c.params.L;
  write_report(rep, out);
  if (err > 2.0 / c.params.L) {
    std::cerr << "conductance: |sigma_e - 1/2pi| = " << err << " exceeds 2/L\n";
    return 1;
  }
  return 0;
}

int cmd_index(const RunConfig& c, const fs::path& out) {
  BranchSet bs = run_sweep(c);
  // Fermi levels spread across Delta, nudged off endpoint eigenvalues by the
  // crossing_count precondition if needed.
  nlohmann::json rep;
  bool ok = true;
  rep["fermi_levels"] = nlohmann::json::array();
  for (int i = 0; i < c.n_fermi; ++i) {
    const double t = (i + 1.0) / (c.n_fermi + 1.0);
    const double e_F = bs.delta.lo + t * bs.delta.width();
    CrossingIndexResult r = crossing_vs_index(bs, e_F);
    rep["fermi_levels"].push_back({{"E_F", e_F},
                                   {"Q_branches", r.q_branches},
                                   {"Q_index", r.q_index},
                                   {"equal", r.equal}});
    ok = ok && r.equal;
  }
  int identity_failures = 0;
  for (int t = 0; t < c.n_triples; ++t) {
    ProjectionTriple tr = random_projection_triple(c.triple_dim, c.seed + t);
    if (!index_identities_check(tr.P, tr.Q, tr.R, tr.U).all()) ++identity_failures;
  }
  rep["identity_failures"] = identity_failures;
  write_report(rep, out);
  ok = ok && identity_failures == 0;
  if (!ok) std::cerr << "index: crossing/index mismatch or identity failure\n";
  return ok ? 0 : 1;
}

int cmd_decouple(const RunConfig& c, const fs::path& out) {
  DisorderField dis = sample_disorder(c.seed, c.grid, c.params.w);
  DecouplingResult r = decoupling_compare(c.params, c.grid, dis, c.D_values, 0.0,
                                          c.decouple_window);
  {
    std::ofstream os(out / "decoupling.csv");
    write_decoupling_csv(os, r);
  }
  nlohmann::json rep;
  rep["fit_slope"] = r.fit_slope;
  rep["monotone"] = r.monotone;
  write_report(rep, out);
  const bool ok = r.monotone && r.fit_slope < 0.0;
  if (!ok) std::cerr << "decouple: deviation sequence not exponentially decaying\n";
  return ok ? 0 : 1;
}

int cmd_toy(const RunConfig& c, const fs::path& out) {
  ToySpectrum s = toy_spectrum(c.toy_m_lo, c.toy_m_hi, c.toy_L, c.toy_v_bar, 0.0);
  {
    std::ofstream os(out / "toy_levels.csv");
    os << "m,E\n";
    for (int m = s.m_lo; m <= s.m_hi; ++m)
      os << m << ',' << format_double(s.level(m)) << '\n';
  }
  const double mid = 0.5 * (s.level(s.m_lo) + s.level(s.m_hi));
  const int q = toy_crossing_count(s, mid + 0.1 * s.spacing());
  const double sigma =
      toy_edge_conductance(s, s.level(s.m_lo) + 0.25 * s.spacing(),
                           s.level(s.m_hi) - 0.25 * s.spacing());
  std::vector<double> v(c.toy_sites);
  for (int j = 0; j < c.toy_sites; ++j)
    v[j] = c.toy_v_bar + 0.1 * std::sin(kTwoPi * j / c.toy_sites);
  const double numeric_err = toy_numeric_check(c.toy_L, v, c.toy_sites);

  nlohmann::json rep;
  rep["spacing"] = s.spacing();
  rep["flow_rate"] = s.flow_rate();
  rep["winding"] = q;
  rep["sigma_e"] = sigma;
  rep["sigma_e_error"] = std::abs(sigma - 1.0 / kTwoPi);
  rep["numeric_dispersion_error"] = numeric_err;
  write_report(rep, out);

  const bool ok = q == 1 && std::abs(sigma - 1.0 / kTwoPi) <= 1e-12;
  if (!ok) std::cerr << "toy: analytic identities violated\n";
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"Edge spectral-flow simulator"};
  app.require_subcommand(1);
  CommonOpts o;
  std::string sub;
  for (const char* name : {"branches", "sweep", "spacing", "conductance", "index",
                           "decouple", "toy"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", o.config_path, "JSON config file");
    s->add_option("--out", o.out_dir, "output directory");
    s->add_option("--seed", o.seed, "disorder seed");
    s->add_option("--phi-steps", o.phi_steps, "flux grid steps");
    s->add_option("--threads", o.threads, "worker threads");
    s->callback([&sub, name] { sub = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig c = resolve(o);
    fs::path out(o.out_dir);
    echo_config(c, out);
    if (sub == "branches") return cmd_branches(c, out);
    if (sub == "sweep") return cmd_sweep(c, out);
    if (sub == "spacing") return cmd_spacing(c, out);
    if (sub == "conductance") return cmd_conductance(c, out);
    if (sub == "index") return cmd_index(c, out);
    if (sub == "decouple") return cmd_decouple(c, out);
    if (sub == "toy") return cmd_toy(c, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
