#pragma once

// Property checks shared by the unit suite and the acceptance runner. Each
// returns pass/fail with the worst deviation observed.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "support.hpp"
#include "xycorr/analytic_chain.hpp"
#include "xycorr/measures.hpp"
#include "xycorr/quench.hpp"

namespace xytest {

struct CheckResult {
  bool pass = true;
  double worst = 0.0;
  std::string detail;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

/// With no field change every measure series is constant and equal to the
/// equilibrium value at the initial temperature.
inline CheckResult check_no_quench_constancy() {
  using namespace xycorr;
  CheckResult r;
  const Measure ms[] = {Measure::concurrence, Measure::log_negativity, Measure::discord, Measure::work_deficit};
  for (const SpinLattice& l : {build_chain(6), build_ladder(3), build_torus(3, 2)}) {
    QuenchProtocol p;
    p.lattice = l;
    p.gamma = 0.5;
    p.beta_tilde = 20.0;
    p.a_tilde = 0.4;
    p.h_final_tilde = 0.4;
    p.num_samples = 40;
    const FiniteEquilibrium eq(l, ModelParams{1.0, p.gamma, p.h_final_tilde});
    const Edge edges[] = {l.edges.front(), l.edges.back()};
    QuenchOptions opts;
    opts.doubled_window_check = false;
    for (const auto& res : run_quench(p, edges, ms, opts)) {
      const double eq_value = evaluate(res.measure, eq.edge_state(res.edge, p.beta_tilde));
      double dev = res.series.std_dev;
      for (double v : res.series.values) dev = std::max(dev, std::abs(v - eq_value));
      r.worst = std::max(r.worst, dev);
    }
  }
  // Infinite chain: a = 0 quench against the equilibrium formulas.
  for (double beta : {2.0, 20.0}) {
    const auto a = analytic::evolved_long_time_observables({0.5, beta, 0.0});
    const auto b = analytic::equilibrium_zero_field_observables(0.5, beta);
    r.worst = std::max({r.worst, std::abs(a.mz - b.mz), std::abs(a.txx - b.txx), std::abs(a.tyy - b.tyy),
                        std::abs(a.tzz - b.tzz)});
  }
  r.pass = r.worst < 1e-8;
  r.detail = "max deviation " + fmt(r.worst);
  return r;
}

/// Concurrence and log-negativity vanish together on random two-qubit states.
inline CheckResult check_ppt_equivalence(int trials) {
  using namespace xycorr;
  CheckResult r;
  int mismatches = 0, entangled = 0;
  for (int k = 0; k < trials; ++k) {
    const TwoQubitState rho(Eigen::Matrix4cd(random_state(4)), StateSource::generic);
    const bool c = concurrence(rho) > 1e-6;
    const bool e = log_negativity(rho) > 1e-6;
    entangled += c;
    mismatches += (c != e);
  }
  r.pass = mismatches == 0;
  r.worst = mismatches;
  r.detail = std::to_string(mismatches) + " mismatches, " + std::to_string(entangled) + "/" + std::to_string(trials) +
             " entangled";
  return r;
}

inline CheckResult check_bell_diagonal_deficit(int trials) {
  using namespace xycorr;
  CheckResult r;
  for (int k = 0; k < trials; ++k) {
    const TwoQubitState rho(random_bell_diagonal(), StateSource::generic);
    r.worst = std::max(r.worst, std::abs(work_deficit(rho).value - discord(rho).value));
  }
  r.pass = r.worst < 1e-4;
  r.detail = "max |WD - Q| " + fmt(r.worst);
  return r;
}

inline CheckResult check_discord_grid_oracle(int trials) {
  using namespace xycorr;
  CheckResult r;
  for (int k = 0; k < trials; ++k) {
    const Eigen::Matrix4cd m = random_x_state();
    const double q = discord(TwoQubitState(m, StateSource::generic)).value;
    r.worst = std::max(r.worst, std::abs(q - oracle_discord(m, 0.5)));
  }
  r.pass = r.worst < 1e-4;
  r.detail = "max |Q - grid| " + fmt(r.worst);
  return r;
}

/// Edge RDMs of the sector engine against U(t) rho0 U(t)^H with U and rho0
/// from dense matrix exponentials, at every sample of the protocol.
inline CheckResult check_small_evolution_oracle() {
  using namespace xycorr;
  CheckResult r;
  const SpinLattice l = build_chain(4);
  QuenchProtocol p;
  p.lattice = l;
  p.J = 1.0;
  p.gamma = 0.5;
  p.beta_tilde = 3.0;
  p.a_tilde = 0.8;
  p.h_final_tilde = 0.1;
  p.num_samples = 60;
  const CMatrix h_pre = build_xy_hamiltonian(l, ModelParams{p.J, p.gamma, p.a_tilde}).matrix();
  const CMatrix h_post = build_xy_hamiltonian(l, ModelParams{p.J, p.gamma, p.h_final_tilde}).matrix();
  const CMatrix rho0 = oracle_thermal(h_pre, p.beta_tilde);
  const QuenchEngine engine(p);
  const std::vector<double> times = p.times();
  for (const Edge& e : l.edges) {
    const auto exps = engine.edge_expansions(e, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const CMatrix u = oracle_propagator(h_post, times[k]);
      const CMatrix rho_t = u * rho0 * u.adjoint();
      const CMatrix expected = brute_force_rdm(rho_t, 4, e.i, e.j);
      r.worst = std::max(r.worst, (CMatrix(state_from_expansion(exps[k])) - expected).cwiseAbs().maxCoeff());
    }
  }
  r.pass = r.worst < 1e-8;
  r.detail = "max entry deviation " + fmt(r.worst);
  return r;
}

/// Dephased edge RDM against the sampled average over t in [0, 5000].
inline CheckResult check_diagonal_ensemble_window() {
  using namespace xycorr;
  CheckResult r;
  const SpinLattice l = build_chain(4);
  QuenchProtocol p;
  p.lattice = l;
  p.gamma = 0.5;
  p.beta_tilde = 2.0;
  p.a_tilde = 0.9;
  p.h_final_tilde = 1.13;
  const RVector ev =
      hermitian_eigensystem(build_xy_hamiltonian(l, ModelParams{1.0, p.gamma, p.h_final_tilde})).values;
  // Degenerate levels keep their coherences in the dephased state; only
  // distinct levels need to be resolved by the window.
  double min_spacing = 1e300;
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    const double d = ev(k) - ev(k - 1);
    if (d > 1e-9) min_spacing = std::min(min_spacing, d);
  }
  if (5000.0 * min_spacing < 100.0) {
    r.pass = false;
    r.detail = "window too short for level spacing " + fmt(min_spacing);
    return r;
  }
  const QuenchEngine engine(p);
  const int n = 50001;
  std::vector<double> times(n);
  for (int k = 0; k < n; ++k) times[static_cast<std::size_t>(k)] = 5000.0 * k / (n - 1);
  for (const Edge& e : {l.edges.front()}) {
    const auto exps = engine.edge_expansions(e, times);
    Eigen::Matrix4d mean = Eigen::Matrix4d::Zero();
    for (int k = 0; k < n; ++k) mean += exps[static_cast<std::size_t>(k)];
    mean /= n;
    r.worst = std::max(r.worst, (state_from_expansion(mean) - state_from_expansion(exps.back())).cwiseAbs().maxCoeff());
  }
  r.pass = r.worst < 1e-3;
  r.detail = "max entry deviation " + fmt(r.worst) + " (min level spacing " + fmt(min_spacing) + ")";
  return r;
}

}  // namespace xytest
