#include "xycorr/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "xycorr/parallel.hpp"

namespace xycorr {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::chain_infinite: return "chain-infinite";
    case ModelKind::chain: return "chain";
    case ModelKind::ladder: return "ladder";
    case ModelKind::torus: return "torus";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "chain-infinite") return ModelKind::chain_infinite;
  if (name == "chain") return ModelKind::chain;
  if (name == "ladder") return ModelKind::ladder;
  if (name == "torus") return ModelKind::torus;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

SpinLattice ModelSpec::lattice() const {
  switch (kind) {
    case ModelKind::chain: return build_chain(geometry[0]);
    case ModelKind::ladder: return build_ladder(geometry[0]);
    case ModelKind::torus: return build_torus(geometry[0], geometry[1]);
    case ModelKind::chain_infinite: break;
  }
  throw std::invalid_argument("the infinite chain has no finite lattice");
}

std::string ModelSpec::describe() const {
  if (kind == ModelKind::chain_infinite) return "chain-infinite";
  return lattice().describe();
}

std::vector<Edge> representative_edges(const SpinLattice& lattice) {
  std::vector<Edge> out;
  switch (lattice.kind) {
    case LatticeKind::chain:
      out.push_back(lattice.representative(EdgeKind::bond, 0));
      break;
    case LatticeKind::ladder:
      out.push_back(lattice.representative(EdgeKind::leg, 0));
      out.push_back(lattice.representative(EdgeKind::rung, 1));
      break;
    case LatticeKind::torus:
      out.push_back(lattice.representative(EdgeKind::bond, 0));
      out.push_back(lattice.representative(EdgeKind::bond, 1));
      break;
  }
  return out;
}

std::string edge_label(const SpinLattice& lattice, const Edge& edge) {
  if (lattice.kind == LatticeKind::torus) return edge.axis == 0 ? "x" : "y";
  return to_string(edge.kind);
}

std::vector<double> linear_grid(double start, double stop, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  if (points == 1) return {start};
  if (!(stop > start)) throw std::invalid_argument("grid requires stop > start");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = start + (stop - start) * k / (points - 1);
  g.back() = stop;
  return g;
}

std::vector<double> log_grid(double start, double stop, int points) {
  if (!(start > 0.0)) throw std::invalid_argument("log grid requires a positive start");
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  if (points == 1) return {start};
  if (!(stop > start)) throw std::invalid_argument("grid requires stop > start");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double step = std::log(stop / start) / (points - 1);
  for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = start * std::exp(step * k);
  g.front() = start;
  g.back() = stop;
  return g;
}

void ScanRange::validate() const {
  if (!(relevant_lo > 0.0) || !(relevant_hi > relevant_lo))
    throw std::invalid_argument("relevant range requires 0 < lo < hi");
  if (!(scan_lo > 0.0) || scan_lo > relevant_lo || scan_hi < relevant_hi)
    throw std::invalid_argument("scan range must contain the relevant range");
  if (points < 2) throw std::invalid_argument("scan range needs at least two points");
}

std::vector<double> ScanRange::grid() const {
  validate();
  std::vector<double> g = log_grid(relevant_lo, relevant_hi, points);
  const double step = std::log(relevant_hi / relevant_lo) / (points - 1);
  for (int k = 1;; ++k) {
    const double b = relevant_lo * std::exp(-step * k);
    if (b <= scan_lo * (1.0 + 1e-9)) break;
    g.push_back(b);
  }
  if (scan_lo < relevant_lo) g.push_back(scan_lo);
  for (int k = 1;; ++k) {
    const double b = relevant_hi * std::exp(step * k);
    if (b >= scan_hi * (1.0 - 1e-9)) break;
    g.push_back(b);
  }
  if (scan_hi > relevant_hi) g.push_back(scan_hi);
  std::sort(g.begin(), g.end());
  return g;
}

bool ScanRange::in_relevant(double beta_prime) const {
  return beta_prime >= relevant_lo * (1.0 - 1e-12) && beta_prime <= relevant_hi * (1.0 + 1e-12);
}

ScanRange default_scan_range(double beta_tilde) {
  if (!(beta_tilde > 0.0)) throw std::invalid_argument("scan range requires beta_tilde > 0");
  ScanRange r;
  r.relevant_lo = beta_tilde / 10.0;
  r.relevant_hi = 10.0 * beta_tilde;
  r.scan_lo = std::min(0.01, r.relevant_lo);
  r.scan_hi = r.relevant_hi;
  r.points = 400;
  return r;
}

void EquilibriumCurve::validate() const {
  if (beta_tilde_grid.empty()) throw std::invalid_argument("equilibrium curve is empty");
  if (values.size() != measures.size()) throw std::invalid_argument("equilibrium curve: measure count mismatch");
  for (std::size_t k = 1; k < beta_tilde_grid.size(); ++k) {
    if (!(beta_tilde_grid[k] > beta_tilde_grid[k - 1]))
      throw std::invalid_argument("equilibrium curve grid is not ascending");
  }
  for (const auto& v : values) {
    if (v.size() != beta_tilde_grid.size()) throw std::invalid_argument("equilibrium curve: length mismatch");
    for (double x : v) {
      if (!std::isfinite(x)) throw std::invalid_argument("equilibrium curve has non-finite values");
    }
  }
}

const std::vector<double>& EquilibriumCurve::values_for(Measure m) const {
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (measures[k] == m) return values[k];
  }
  throw std::invalid_argument("equilibrium curve has no values for " + std::string(short_name(m)));
}

namespace {

void check_beta_grid(std::span<const double> beta_grid) {
  if (beta_grid.empty()) throw std::invalid_argument("beta grid is empty");
  for (std::size_t k = 0; k < beta_grid.size(); ++k) {
    if (beta_grid[k] < 0.0) throw std::invalid_argument("beta grid must be nonnegative");
    if (k > 0 && !(beta_grid[k] > beta_grid[k - 1])) throw std::invalid_argument("beta grid must be ascending");
  }
}

template <class StateAt>
EquilibriumCurve fill_curve(std::string model, std::string edge, double gamma, std::span<const double> beta_grid,
                            std::span<const Measure> measures, const CurveOptions& opts, StateAt&& state_at) {
  check_beta_grid(beta_grid);
  EquilibriumCurve c;
  c.model = std::move(model);
  c.edge = std::move(edge);
  c.gamma = gamma;
  c.beta_tilde_grid.assign(beta_grid.begin(), beta_grid.end());
  c.measures.assign(measures.begin(), measures.end());
  c.values.assign(measures.size(), std::vector<double>(beta_grid.size()));
  parallel_for(beta_grid.size(), opts.workers, [&](std::size_t k) {
    const TwoQubitState rho = state_at(beta_grid[k]);
    for (std::size_t m = 0; m < measures.size(); ++m) c.values[m][k] = evaluate(measures[m], rho, opts.optimizer);
  });
  c.validate();
  return c;
}

}  // namespace

EquilibriumCurve equilibrium_curve(const FiniteEquilibrium& eq, const SpinLattice& lattice, const Edge& edge,
                                   double gamma, std::span<const double> beta_grid,
                                   std::span<const Measure> measures, const CurveOptions& opts) {
  // Fill the per-edge cache before the parallel region.
  (void)eq.edge_state(edge, 0.0);
  return fill_curve(lattice.describe(), edge_label(lattice, edge), gamma, beta_grid, measures, opts,
                    [&](double beta) { return eq.edge_state(edge, beta); });
}

EquilibriumCurve equilibrium_curve(const ModelSpec& model, double gamma, std::span<const double> beta_grid,
                                   std::span<const Measure> measures, const Edge* edge, const CurveOptions& opts) {
  if (!model.finite()) {
    if (opts.h_tilde != 0.0) throw std::invalid_argument("infinite-chain curves are available at zero field only");
    return fill_curve(model.describe(), "bond", gamma, beta_grid, measures, opts, [&](double beta) {
      return state_from_observables(analytic::equilibrium_zero_field_observables(gamma, beta),
                                    StateSource::equilibrium);
    });
  }
  const SpinLattice lattice = model.lattice();
  const Edge e = edge ? *edge : representative_edges(lattice).front();
  const FiniteEquilibrium eq(lattice, ModelParams{model.J, gamma, opts.h_tilde * model.J});
  // beta_tilde = beta |J|.
  std::vector<double> betas(beta_grid.begin(), beta_grid.end());
  for (double& b : betas) b /= std::abs(model.J);
  EquilibriumCurve c = equilibrium_curve(eq, lattice, e, gamma, betas, measures, opts);
  c.beta_tilde_grid.assign(beta_grid.begin(), beta_grid.end());
  return c;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::strongly_nonergodic: return "strongly-nonergodic";
    case Verdict::nonergodic: return "nonergodic";
    case Verdict::canonically_ergodic: return "canonically-ergodic";
    case Verdict::ergodic: return "ergodic";
  }
  return "?";
}

ErgodicityVerdict verdict(double p_inf, double series_std, const EquilibriumCurve& curve, Measure m,
                          const ScanRange& range, const VerdictOptions& opts) {
  curve.validate();
  const std::vector<double>& v = curve.values_for(m);
  const std::vector<double>& b = curve.beta_tilde_grid;
  if (!std::isfinite(p_inf)) throw std::invalid_argument("verdict: p_infinity is not finite");

  ErgodicityVerdict out;
  out.measure_name = std::string(short_name(m));
  out.p_infinity = p_inf;
  out.range = range;
  out.epsilon = opts.epsilon ? *opts.epsilon : std::max(series_std, opts.epsilon_floor);

  constexpr double inf = std::numeric_limits<double>::infinity();
  double gap_all = inf, gap_rel = inf, beta_all = b.front(), beta_rel = b.front();
  auto consider = [&](double gap, double beta, bool relevant) {
    if (gap < gap_all) {
      gap_all = gap;
      beta_all = beta;
    }
    if (relevant && gap < gap_rel) {
      gap_rel = gap;
      beta_rel = beta;
    }
  };

  for (std::size_t k = 0; k < b.size(); ++k) consider(std::abs(v[k] - p_inf), b[k], range.in_relevant(b[k]));
  // The curve is treated as piecewise linear between grid points.
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double d0 = v[k] - p_inf;
    const double d1 = v[k + 1] - p_inf;
    if (d0 * d1 < 0.0) {
      const double beta = b[k] + d0 / (d0 - d1) * (b[k + 1] - b[k]);
      consider(0.0, beta, range.in_relevant(b[k]) && range.in_relevant(b[k + 1]));
    }
  }

  out.min_gap = gap_all;
  out.min_gap_relevant = gap_rel;
  if (gap_rel <= opts.equality_tol) {
    out.verdict = Verdict::ergodic;
  } else if (gap_rel <= out.epsilon) {
    out.verdict = Verdict::canonically_ergodic;
  } else if (gap_all > out.epsilon) {
    out.verdict = Verdict::strongly_nonergodic;
  } else {
    out.verdict = Verdict::nonergodic;
  }
  out.best_beta_prime = gap_rel <= std::max(out.epsilon, opts.equality_tol) ? beta_rel : beta_all;
  return out;
}

std::vector<RegionRow> region_report(const ModelSpec& model, double gamma, double beta_tilde,
                                     std::span<const double> a_list, std::span<const Measure> measures,
                                     const RegionOptions& opts) {
  if (a_list.empty()) throw std::invalid_argument("region report needs at least one field value");
  if (measures.empty()) throw std::invalid_argument("region report needs at least one measure");
  opts.range.validate();
  const std::vector<double> grid = opts.range.grid();
  CurveOptions copts;
  copts.optimizer = opts.optimizer;
  copts.workers = opts.workers;
  copts.h_tilde = opts.h_final_tilde;

  std::vector<RegionRow> rows;
  auto add_row = [&](const std::string& model_name, const std::string& edge, double a, Measure m, double p_inf,
                     double std_dev, const EquilibriumCurve& curve) {
    RegionRow r;
    r.model = model_name;
    r.edge = edge;
    r.a_tilde = a;
    r.region = analytic::classify_field_region(a);
    r.measure = m;
    r.series_std = std_dev;
    r.dephased_value = p_inf;
    r.verdict = verdict(p_inf, std_dev, curve, m, opts.range, opts.verdict);
    return r;
  };

  if (!model.finite()) {
    if (opts.h_final_tilde != 0.0) throw std::invalid_argument("the infinite chain supports h_final = 0 only");
    const EquilibriumCurve curve = equilibrium_curve(model, gamma, grid, measures, nullptr, copts);
    for (double a : a_list) {
      const TwoQubitState rho = state_from_observables(
          analytic::evolved_long_time_observables(analytic::ChainParams{gamma, beta_tilde, a}));
      for (Measure m : measures) {
        rows.push_back(add_row(curve.model, "bond", a, m, evaluate(m, rho, opts.optimizer), 0.0, curve));
      }
    }
    return rows;
  }

  const SpinLattice lattice = model.lattice();
  const std::vector<Edge> edges = representative_edges(lattice);
  const FiniteEquilibrium eq(lattice, ModelParams{model.J, gamma, opts.h_final_tilde * model.J});
  std::vector<double> betas = grid;
  for (double& b : betas) b /= std::abs(model.J);

  std::vector<EquilibriumCurve> curves;
  for (const Edge& e : edges) {
    EquilibriumCurve c = equilibrium_curve(eq, lattice, e, gamma, betas, measures, copts);
    c.beta_tilde_grid = grid;
    curves.push_back(std::move(c));
  }

  QuenchOptions qopts;
  qopts.doubled_window_check = opts.doubled_window_check;
  qopts.optimizer = opts.optimizer;
  qopts.workers = opts.workers;
  // results[a][edge * measures + m]
  std::vector<std::vector<QuenchSeriesResult>> results;
  for (double a : a_list) {
    QuenchProtocol p;
    p.lattice = lattice;
    p.J = model.J;
    p.gamma = gamma;
    p.beta_tilde = beta_tilde;
    p.a_tilde = a;
    p.h_final_tilde = opts.h_final_tilde;
    p.t_min = opts.t_min;
    p.t_max = opts.t_max;
    p.num_samples = opts.num_samples;
    results.push_back(run_quench(p, edges, measures, qopts));
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t ai = 0; ai < a_list.size(); ++ai) {
      for (std::size_t mi = 0; mi < measures.size(); ++mi) {
        const QuenchSeriesResult& q = results[ai][e * measures.size() + mi];
        RegionRow r = add_row(curves[e].model, curves[e].edge, a_list[ai], measures[mi], q.series.mean,
                              q.series.std_dev, curves[e]);
        r.dephased_value = q.dephased_value;
        r.converged = q.converged;
        r.structure_warning = q.structure_warning;
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

}  // namespace xycorr
