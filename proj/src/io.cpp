#include "edgeflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace edgeflow {

void RunConfig::validate() const {
  params.validate();
  grid.validate(params.B, params.L);
  if (phi_steps < 64) throw std::invalid_argument("config: phi_steps must be >= 64");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (!(k_max > k_min) || !(k_step > 0.0))
    throw std::invalid_argument("config: need k_min < k_max and k_step > 0");
  if (n_max < 0) throw std::invalid_argument("config: n_max must be >= 0");
  if (n_fermi < 1 || n_triples < 1 || triple_dim < 4)
    throw std::invalid_argument("config: index options out of range");
  for (std::size_t i = 0; i + 1 < D_values.size(); ++i)
    if (D_values[i + 1] <= D_values[i])
      throw std::invalid_argument("config: D_values must be strictly increasing");
  if (!(decouple_window.width() > 0.0))
    throw std::invalid_argument("config: decouple_window is empty");
  if (toy_m_lo > toy_m_hi || !(toy_L > 0.0) || toy_sites < 32)
    throw std::invalid_argument("config: toy options out of range");
}

namespace {
template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& dst) {
  if (auto it = j.find(key); it != j.end()) dst = it->get<T>();
}
} // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (auto it = j.find("params"); it != j.end()) {
    const auto& p = *it;
    get_if(p, "B", c.params.B);
    get_if(p, "w", c.params.w);
    get_if(p, "L", c.params.L);
    get_if(p, "gamma", c.params.gamma);
    get_if(p, "u", c.params.u);
    get_if(p, "epsilon", c.params.epsilon);
    get_if(p, "delta", c.params.delta);
  }
  if (auto it = j.find("grid"); it != j.end()) {
    const auto& g = *it;
    get_if(g, "x_min", c.grid.x_min);
    get_if(g, "x_max", c.grid.x_max);
    get_if(g, "hx", c.grid.hx);
    get_if(g, "ny", c.grid.ny);
  }
  get_if(j, "seed", c.seed);
  get_if(j, "phi_steps", c.phi_steps);
  get_if(j, "threads", c.threads);
  get_if(j, "k_min", c.k_min);
  get_if(j, "k_max", c.k_max);
  get_if(j, "k_step", c.k_step);
  get_if(j, "n_max", c.n_max);
  get_if(j, "n_fermi", c.n_fermi);
  get_if(j, "n_triples", c.n_triples);
  get_if(j, "triple_dim", c.triple_dim);
  get_if(j, "D_values", c.D_values);
  if (auto it = j.find("decouple_window"); it != j.end()) {
    c.decouple_window.lo = it->at(0).get<double>();
    c.decouple_window.hi = it->at(1).get<double>();
  }
  get_if(j, "toy_L", c.toy_L);
  get_if(j, "toy_v_bar", c.toy_v_bar);
  get_if(j, "toy_m_lo", c.toy_m_lo);
  get_if(j, "toy_m_hi", c.toy_m_hi);
  get_if(j, "toy_sites", c.toy_sites);
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["params"] = {{"B", c.params.B},         {"w", c.params.w},
                 {"L", c.params.L},         {"gamma", c.params.gamma},
                 {"u", c.params.u},         {"epsilon", c.params.epsilon},
                 {"delta", c.params.delta}};
  j["grid"] = {{"x_min", c.grid.x_min},
               {"x_max", c.grid.x_max},
               {"hx", c.grid.hx},
               {"ny", c.grid.ny}};
  j["seed"] = c.seed;
  j["phi_steps"] = c.phi_steps;
  j["threads"] = c.threads;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["k_step"] = c.k_step;
  j["n_max"] = c.n_max;
  j["n_fermi"] = c.n_fermi;
  j["n_triples"] = c.n_triples;
  j["triple_dim"] = c.triple_dim;
  j["D_values"] = c.D_values;
  j["decouple_window"] = {c.decouple_window.lo, c.decouple_window.hi};
  j["toy_L"] = c.toy_L;
  j["toy_v_bar"] = c.toy_v_bar;
  j["toy_m_lo"] = c.toy_m_lo;
  j["toy_m_hi"] = c.toy_m_hi;
  j["toy_sites"] = c.toy_sites;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_branch_table_csv(std::ostream& os, const BranchTable& table) {
  os << "k";
  for (int n = 0; n < table.eps.rows(); ++n) os << ",eps" << n;
  os << ",deps0\n";
  for (int ik = 0; ik < table.k.size(); ++ik) {
    os << format_double(table.k[ik]);
    for (int n = 0; n < table.eps.rows(); ++n) os << ',' << format_double(table.eps(n, ik));
    os << ',' << format_double(table.deps0[ik]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const BranchSet& bs) {
  os << "branch,start,left_weight,phi_index,phi,E,j,dEdPhi_fd\n";
  const double dphi = bs.dphi();
  for (std::size_t b = 0; b < bs.branches.size(); ++b) {
    const Branch& br = bs.branches[b];
    const int m = static_cast<int>(br.energy.size());
    for (int i = 0; i < m; ++i) {
      const int q = br.start + i;
      os << b << ',' << br.start << ',' << format_double(br.left_weight) << ',' << q << ','
         << format_double(bs.phi[q]) << ','
         << format_double(br.energy[i]) << ',' << format_double(br.current[i]) << ',';
      if (i > 0 && i + 1 < m)
        os << format_double((br.energy[i + 1] - br.energy[i - 1]) / (2.0 * dphi));
      os << '\n';
    }
  }
}

void write_spacing_csv(std::ostream& os, const SpacingStats& st) {
  os << "level_lo,level_hi,spacing,s\n";
  for (std::size_t i = 0; i < st.spacings.size(); ++i)
    os << format_double(st.levels[i]) << ',' << format_double(st.levels[i + 1]) << ','
       << format_double(st.spacings[i]) << ',' << format_double(st.s[i]) << '\n';
}

void write_histogram_csv(std::ostream& os, const SpacingStats& st) {
  os << "s_lo,s_hi,count\n";
  for (std::size_t b = 0; b < st.histogram.size(); ++b)
    os << format_double(b * st.bin_width) << ',' << format_double((b + 1) * st.bin_width)
       << ',' << st.histogram[b] << '\n';
}

void write_decoupling_csv(std::ostream& os, const DecouplingResult& r) {
  os << "D,direct_dev,first_order_dev,hybrid_dev,projector_dev\n";
  for (const DecouplingPoint& pt : r.points)
    os << format_double(pt.D) << ',' << format_double(pt.direct_dev) << ','
       << format_double(pt.first_order_dev) << ',' << format_double(pt.hybrid_dev) << ','
       << format_double(pt.projector_dev) << '\n';
}

} // namespace edgeflow
