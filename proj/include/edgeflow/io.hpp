#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "edgeflow/flow.hpp"
#include "edgeflow/index.hpp"
#include "edgeflow/model.hpp"
#include "edgeflow/spectra.hpp"

// Configuration plumbing and deterministic artifact emission. Every float is
// printed with 17 significant digits so reruns can be diffed byte for byte.

namespace edgeflow {

struct RunConfig {
  PhysicalParams params;
  GridSpec grid;
  std::uint64_t seed = 1;
  int phi_steps = 128;
  int threads = 1;

  // branches subcommand
  double k_min = -6.0;
  double k_max = 3.0;
  double k_step = 0.05;
  int n_max = 3;

  // index subcommand
  int n_fermi = 5;
  int n_triples = 100;
  int triple_dim = 24;

  // decouple subcommand
  std::vector<double> D_values{2.0, 4.0, 6.0, 8.0};
  EnergyWindow decouple_window{0.8, 1.2};

  // toy subcommand
  double toy_L = 20.0;
  double toy_v_bar = 0.3;
  int toy_m_lo = -5;
  int toy_m_hi = 5;
  int toy_sites = 256;

  void validate() const; // params + grid + step counts
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

// 17-significant-digit decimal rendering (shortest round-trip superset).
std::string format_double(double v);

void write_branch_table_csv(std::ostream& os, const BranchTable& table);
// Columns: branch, start, left_weight, phi_index, phi, E, j, dEdPhi_fd
// (dEdPhi_fd empty at branch ends).
void write_sweep_csv(std::ostream& os, const BranchSet& bs);
void write_spacing_csv(std::ostream& os, const SpacingStats& st);
void write_histogram_csv(std::ostream& os, const SpacingStats& st);
void write_decoupling_csv(std::ostream& os, const DecouplingResult& r);

} // namespace edgeflow
