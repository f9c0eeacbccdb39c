#include "edgeflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace edgeflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNearDegenerateGap = 1e-10;
constexpr double kOverlapFloor = 0.9;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t p) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (p + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
} // namespace

double branch_current(const Eigen::VectorXcd& psi, const SparseCd& dH_dphi) {
  return std::real(psi.dot(dH_dphi * psi));
}

BranchSet sweep_flux(const PhysicalParams& p, const GridSpec& grid,
                     const DisorderField& disorder, int phi_steps,
                     const EnergyWindow& delta, const EigenOptions& opts, int threads) {
  if (phi_steps < 64)
    throw std::invalid_argument("sweep_flux: phi_steps must be at least 64 for reliable tracking");
  p.validate();
  grid.validate(p.B, p.L);
  auto [g0t, delta_default] = gap_window(p);
  if (!(delta.lo >= g0t.lo - 1e-12 && delta.hi <= g0t.hi + 1e-12))
    throw std::invalid_argument("sweep_flux: Delta must lie inside the gap window");

  BranchSet bs;
  bs.delta = delta;
  bs.L = p.L;
  bs.B = p.B;
  const double expand = kTwoPi * std::sqrt(3.0 * p.B) / p.L;
  bs.delta_plus = {std::max(delta.lo - expand, g0t.lo), std::min(delta.hi + expand, g0t.hi)};

  const int n_phi = phi_steps + 1;
  bs.phi.resize(n_phi);
  for (int q = 0; q < n_phi; ++q) bs.phi[q] = kTwoPi * q / phi_steps;

  std::vector<int> alive; // branch index per column of prev eigenvectors
  Eigen::MatrixXcd prev_vecs;

  const int block = std::max(1, threads);
  std::vector<EigenPairs> pairs(block);
  std::vector<Eigen::VectorXd> currents(block);
  std::vector<Eigen::VectorXd> weights(block);

  // Probability on the inner half of the x grid, used to recognize states
  // bound to the artificial truncation wall at x_min.
  const int nx = grid.nx();
  const double x_cut = 0.5 * grid.x_min;
  auto left_weight_of = [&](const Eigen::VectorXcd& psi) {
    double s = 0.0;
    for (int idx = 0; idx < psi.size(); ++idx)
      if (grid.x(idx % nx) < x_cut) s += std::norm(psi[idx]);
    return s;
  };

  for (int base = 0; base < n_phi; base += block) {
    const int count = std::min(block, n_phi - base);
    auto solve_one = [&](int off) {
      const int q = base + off;
      EigenOptions local = opts;
      local.lanczos_seed = mix_seed(opts.lanczos_seed, static_cast<std::uint64_t>(q));
      HermitianMatrix H = build_hamiltonian(p, grid, disorder, bs.phi[q]);
      pairs[off] = eigen_window(H, bs.delta_plus, local);
      SparseCd dH = build_hamiltonian_dphi(p, grid, bs.phi[q]);
      currents[off].resize(pairs[off].count());
      weights[off].resize(pairs[off].count());
      for (int i = 0; i < pairs[off].count(); ++i) {
        currents[off][i] = branch_current(pairs[off].vectors.col(i), dH);
        weights[off][i] = left_weight_of(pairs[off].vectors.col(i));
      }
    };
    if (count == 1 || threads <= 1) {
      for (int off = 0; off < count; ++off) solve_one(off);
    } else {
      std::vector<std::thread> pool;
      for (int off = 0; off < count; ++off) pool.emplace_back(solve_one, off);
      for (auto& t : pool) t.join();
    }

    for (int off = 0; off < count; ++off) {
      const int q = base + off;
      const EigenPairs& ep = pairs[off];
      for (int i = 0; i + 1 < ep.count(); ++i)
        if (ep.values[i + 1] - ep.values[i] < kNearDegenerateGap)
          bs.near_degeneracies.emplace_back(q, ep.values[i]);

      if (q == 0) {
        for (int i = 0; i < ep.count(); ++i) {
          Branch b;
          b.start = 0;
          b.energy.push_back(ep.values[i]);
          b.current.push_back(currents[off][i]);
          b.psi_first = ep.vectors.col(i);
          b.psi_last = b.psi_first;
          b.left_weight = weights[off][i];
          alive.push_back(static_cast<int>(bs.branches.size()));
          bs.branches.push_back(std::move(b));
        }
        prev_vecs = ep.vectors;
        continue;
      }

      // Greedy maximal-overlap assignment between the previous and current
      // eigenvector sets, tie-broken by energy proximity via the scan order.
      const int n_old = static_cast<int>(alive.size());
      const int n_new = ep.count();
      Eigen::MatrixXd overlap = (prev_vecs.adjoint() * ep.vectors).cwiseAbs();
      std::vector<int> old_match(n_old, -1), new_match(n_new, -1);
      int matched = 0;
      while (matched < std::min(n_old, n_new)) {
        double best = -1.0;
        int bi = -1, bj = -1;
        for (int i = 0; i < n_old; ++i) {
          if (old_match[i] >= 0) continue;
          for (int jj = 0; jj < n_new; ++jj) {
            if (new_match[jj] >= 0) continue;
            if (overlap(i, jj) > best) { best = overlap(i, jj); bi = i; bj = jj; }
          }
        }
        if (best < kOverlapFloor) break;
        old_match[bi] = bj;
        new_match[bj] = bi;
        bs.min_overlap = std::min(bs.min_overlap, best);
        ++matched;
      }
      if (matched == 0 && n_old > 0 && n_new > 0) {
        std::ostringstream os;
        os << "sweep_flux: branch tracking lost at flux index " << q
           << " (all eigenvector overlaps below " << kOverlapFloor
           << "); use a finer flux grid";
        throw std::runtime_error(os.str());
      }

      std::vector<int> next_alive(n_new, -1);
      for (int i = 0; i < n_old; ++i) {
        if (old_match[i] < 0) continue; // branch left the tracking window
        Branch& b = bs.branches[alive[i]];
        const int jj = old_match[i];
        b.energy.push_back(ep.values[jj]);
        b.current.push_back(currents[off][jj]);
        b.psi_last = ep.vectors.col(jj);
        b.left_weight = std::max(b.left_weight, weights[off][jj]);
        next_alive[jj] = alive[i];
      }
      for (int jj = 0; jj < n_new; ++jj) {
        if (next_alive[jj] >= 0) continue; // matched above
        Branch b;
        b.start = q;
        b.energy.push_back(ep.values[jj]);
        b.current.push_back(currents[off][jj]);
        b.psi_first = ep.vectors.col(jj);
        b.psi_last = b.psi_first;
        b.left_weight = weights[off][jj];
        next_alive[jj] = static_cast<int>(bs.branches.size());
        bs.branches.push_back(std::move(b));
      }
      alive.assign(next_alive.begin(), next_alive.end());
      prev_vecs = ep.vectors;
    }
  }
  return bs;
}

FlowBoundResult verify_flow_bound(const BranchSet& bs, const AlphaBound& alpha,
                                  double rel_tol) {
  FlowBoundResult r;
  r.min_rate = std::numeric_limits<double>::infinity();
  r.max_rate = -std::numeric_limits<double>::infinity();
  const double dphi = bs.dphi();
  for (const Branch& b : bs.branches) {
    if (b.artificial()) continue;
    const int m = static_cast<int>(b.energy.size());
    if (m < 2) continue;
    for (int i = 0; i < m; ++i) {
      if (!bs.delta.contains(b.energy[i])) continue;
      double d;
      if (i == 0) d = (b.energy[1] - b.energy[0]) / dphi;
      else if (i == m - 1) d = (b.energy[m - 1] - b.energy[m - 2]) / dphi;
      else d = (b.energy[i + 1] - b.energy[i - 1]) / (2.0 * dphi);
      const double rate = bs.L * d;
      r.min_rate = std::min(r.min_rate, rate);
      r.max_rate = std::max(r.max_rate, rate);
    }
  }
  if (!std::isfinite(r.min_rate)) { r.pass = false; return r; }
  r.pass = r.min_rate > 0.0 &&
           (alpha.vacuous || r.min_rate >= alpha.alpha * (1.0 - rel_tol));
  return r;
}

double verify_spectral_shift(const BranchSet& bs) {
  const int n_phi = bs.n_phi();
  // Levels at Phi = 0 come from branches starting at index 0.
  std::vector<const Branch*> at_zero;
  for (const Branch& b : bs.branches)
    if (b.start == 0 && !b.artificial()) at_zero.push_back(&b);
  std::sort(at_zero.begin(), at_zero.end(),
            [](const Branch* a, const Branch* b) { return a->energy[0] < b->energy[0]; });

  double worst = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < at_zero.size(); ++i) {
    const Branch* b = at_zero[i];
    if (!b->spans(n_phi)) continue;
    // The theorem concerns branches meeting Delta; at desk scale that can
    // happen at any flux point, not necessarily at Phi = 0.
    const bool meets_delta =
        std::any_of(b->energy.begin(), b->energy.end(),
                    [&](double e) { return bs.delta.contains(e); });
    if (!meets_delta) continue;
    if (i + 1 >= at_zero.size())
      throw std::runtime_error(
          "verify_spectral_shift: a branch meeting Delta has no successor level at "
          "Phi=0; the tracking window is too tight");
    worst = std::max(worst, std::abs(b->energy.back() - at_zero[i + 1]->energy[0]));
    any = true;
  }
  if (!any)
    throw std::runtime_error(
        "verify_spectral_shift: no branch spanning [0, 2 pi] meets Delta");
  return worst;
}

int crossing_count(const BranchSet& bs, double e_F) {
  if (!bs.delta.contains(e_F))
    throw std::invalid_argument("crossing_count: E_F must lie inside Delta");
  const double collision = 1e-9 * std::max(1.0, bs.B);
  for (const Branch& b : bs.branches) {
    if (b.artificial()) continue;
    if (std::abs(b.energy.front() - e_F) < collision ||
        std::abs(b.energy.back() - e_F) < collision) {
      std::ostringstream os;
      os << "crossing_count: E_F=" << e_F
         << " collides with an endpoint eigenvalue; shift it by half a mean spacing";
      throw std::invalid_argument(os.str());
    }
  }
  int count = 0;
  for (const Branch& b : bs.branches) {
    if (b.artificial()) continue;
    for (std::size_t i = 0; i + 1 < b.energy.size(); ++i) {
      const double a = b.energy[i] - e_F, c = b.energy[i + 1] - e_F;
      if (a < 0.0 && c > 0.0) ++count;
      else if (a > 0.0 && c < 0.0) --count;
    }
  }
  return count;
}

SpacingStats spacing_stats(const BranchSet& bs, const AlphaBound& alpha, double rel_tol) {
  // All Phi = 0 levels in the tracking window give the local density context.
  std::vector<double> all;
  for (const Branch& b : bs.branches)
    if (b.start == 0 && !b.artificial()) all.push_back(b.energy[0]);
  std::sort(all.begin(), all.end());

  SpacingStats st;
  st.levels = all; // every tracked level is an edge state inside the gap
  if (st.levels.size() < 2)
    throw std::runtime_error(
        "spacing_stats: fewer than 2 tracked levels at Phi=0; widen the window");

  st.upper_bound = kTwoPi * std::sqrt(3.0 * bs.B) / bs.L;
  st.lower_bound = alpha.vacuous ? 0.0 : kTwoPi * alpha.alpha / bs.L;
  st.histogram.assign(30, 0);

  const int n_gaps = static_cast<int>(st.levels.size()) - 1;
  for (int i = 0; i < n_gaps; ++i) {
    const double spacing = st.levels[i + 1] - st.levels[i];
    st.spacings.push_back(spacing);
    // Local mean spacing: sliding window of up to 5 consecutive gaps.
    const int lo = std::max(0, i - 2);
    const int hi = std::min(n_gaps - 1, i + 2);
    double mean = 0.0;
    for (int g = lo; g <= hi; ++g) mean += st.levels[g + 1] - st.levels[g];
    mean /= (hi - lo + 1);
    const double s = spacing / mean;
    st.s.push_back(s);
    const int bin = static_cast<int>(s / st.bin_width);
    if (bin >= 0 && bin < 30) ++st.histogram[bin];
    // The theorem bracket is asserted only where both levels sit in Delta;
    // boundary gaps against states outside Delta carry no guarantee.
    if (bs.delta.contains(st.levels[i]) && bs.delta.contains(st.levels[i + 1])) {
      if (spacing > st.upper_bound * (1.0 + rel_tol)) st.bounds_ok = false;
      if (!alpha.vacuous && spacing < st.lower_bound * (1.0 - rel_tol)) st.bounds_ok = false;
    }
  }
  return st;
}

Conductance edge_conductance(const BranchSet& bs) {
  Conductance c;
  double clipped = 0.0, full = 0.0;
  for (const Branch& b : bs.branches) {
    if (b.artificial()) continue;
    const double e0 = b.energy.front(), e1 = b.energy.back();
    const double lo = std::min(e0, e1), hi = std::max(e0, e1);
    const double sweep = std::max(0.0, std::min(hi, bs.delta.hi) - std::max(lo, bs.delta.lo));
    if (sweep <= 0.0) continue;
    ++c.branches_in_window;
    clipped += sweep;
    full += hi - lo;
  }
  const double denom = kTwoPi * bs.delta.width();
  c.sigma_e = clipped / denom;
  c.correction = (full - clipped) / denom;
  return c;
}

double feynman_hellmann_check(const BranchSet& bs) {
  const double dphi = bs.dphi();
  double worst = 0.0;
  for (const Branch& b : bs.branches) {
    const int m = static_cast<int>(b.energy.size());
    for (int i = 1; i + 1 < m; ++i) {
      const double fd = (b.energy[i + 1] - b.energy[i - 1]) / (2.0 * dphi);
      worst = std::max(worst, std::abs(b.current[i] - fd));
    }
  }
  return worst;
}

} // namespace edgeflow
