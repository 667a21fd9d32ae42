#pragma once

// Ergodicity of correlation measures after a field quench: the long-time
// average P_inf is compared with the canonical curve P_can(beta') of the
// post-quench Hamiltonian.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xycorr/analytic_chain.hpp"
#include "xycorr/lattice.hpp"
#include "xycorr/measures.hpp"
#include "xycorr/quench.hpp"

namespace xycorr {

enum class ModelKind { chain_infinite, chain, ladder, torus };

std::string to_string(ModelKind kind);
/// Accepts chain-infinite, chain, ladder, torus.
ModelKind parse_model_kind(std::string_view name);

struct ModelSpec {
  ModelKind kind = ModelKind::chain_infinite;
  /// chain {N, -}, ladder {L, -}, torus {nx, ny}; unused for the infinite chain.
  std::array<int, 2> geometry{12, 0};
  double J = 1.0;

  [[nodiscard]] bool finite() const { return kind != ModelKind::chain_infinite; }
  /// Throws std::invalid_argument for the infinite chain.
  [[nodiscard]] SpinLattice lattice() const;
  /// "chain-infinite", "chain-12", "ladder-2x4", "torus-4x3".
  [[nodiscard]] std::string describe() const;
};

/// One representative edge per inequivalent bond direction: the chain bond,
/// ladder leg and rung, torus x and y bonds.
std::vector<Edge> representative_edges(const SpinLattice& lattice);
/// "bond", "leg", "rung", "x", "y".
std::string edge_label(const SpinLattice& lattice, const Edge& edge);

std::vector<double> linear_grid(double start, double stop, int points);
std::vector<double> log_grid(double start, double stop, int points);

/// Temperatures compared against P_inf. The relevant range is sampled on a
/// log grid of `points` points and the same log spacing is continued down
/// to scan_lo (and up to scan_hi when it exceeds relevant_hi).
struct ScanRange {
  double relevant_lo = 2.0;
  double relevant_hi = 200.0;
  double scan_lo = 0.01;
  double scan_hi = 200.0;
  int points = 400;

  void validate() const;
  [[nodiscard]] std::vector<double> grid() const;
  [[nodiscard]] bool in_relevant(double beta_prime) const;
};

/// relevant [beta/10, 10 beta], scanned [0.01, 10 beta].
ScanRange default_scan_range(double beta_tilde);

struct EquilibriumCurve {
  std::string model;
  std::string edge;
  double gamma = 0.0;
  std::vector<double> beta_tilde_grid;
  std::vector<Measure> measures;
  /// values[m][k]: measure m at beta_tilde_grid[k].
  std::vector<std::vector<double>> values;

  /// Throws std::invalid_argument on inconsistent sizes, non-ascending grid
  /// or non-finite values.
  void validate() const;
  [[nodiscard]] const std::vector<double>& values_for(Measure m) const;
};

struct CurveOptions {
  OptimizerOptions optimizer;
  int workers = 1;
  /// Field of the equilibrium Hamiltonian (h / J); nonzero only for finite models.
  double h_tilde = 0.0;
};

/// Canonical values of each measure on the grid. Finite models need the edge;
/// the infinite chain ignores it.
EquilibriumCurve equilibrium_curve(const ModelSpec& model, double gamma, std::span<const double> beta_grid,
                                   std::span<const Measure> measures, const Edge* edge = nullptr,
                                   const CurveOptions& opts = {});
/// Same, reusing a prepared finite spectrum.
EquilibriumCurve equilibrium_curve(const FiniteEquilibrium& eq, const SpinLattice& lattice, const Edge& edge,
                                   double gamma, std::span<const double> beta_grid,
                                   std::span<const Measure> measures, const CurveOptions& opts = {});

/// Ordered from least to most ergodic.
enum class Verdict { strongly_nonergodic, nonergodic, canonically_ergodic, ergodic };

std::string to_string(Verdict v);

struct ErgodicityVerdict {
  std::string measure_name;
  double p_infinity = 0.0;
  double epsilon = 0.0;
  /// Closest match inside the relevant range when one exists within epsilon,
  /// otherwise over the whole scan.
  double best_beta_prime = 0.0;
  /// min over the scanned curve of |P_can - p_infinity| (piecewise-linear).
  double min_gap = 0.0;
  double min_gap_relevant = 0.0;
  Verdict verdict = Verdict::strongly_nonergodic;
  ScanRange range;
};

struct VerdictOptions {
  /// Empty: epsilon = max(series_std, epsilon_floor).
  std::optional<double> epsilon;
  double epsilon_floor = 1e-4;
  double equality_tol = 1e-3;
};

/// ergodic: gap <= equality_tol inside the relevant range;
/// canonically-ergodic: gap <= epsilon inside it; strongly-nonergodic: gap >
/// epsilon over the whole scan; nonergodic otherwise.
ErgodicityVerdict verdict(double p_inf, double series_std, const EquilibriumCurve& curve, Measure m,
                          const ScanRange& range, const VerdictOptions& opts = {});

struct RegionRow {
  std::string model;
  std::string edge;
  double a_tilde = 0.0;
  analytic::FieldRegion region = analytic::FieldRegion::low;
  Measure measure = Measure::concurrence;
  double series_std = 0.0;
  double dephased_value = 0.0;
  bool converged = true;
  std::string structure_warning;
  ErgodicityVerdict verdict;
};

struct RegionOptions {
  ScanRange range;
  VerdictOptions verdict;
  OptimizerOptions optimizer;
  int workers = 1;
  double h_final_tilde = 0.0;
  double t_min = 20.0;
  double t_max = 120.0;
  int num_samples = 500;
  bool doubled_window_check = true;
};

/// Verdicts for every (edge, a, measure). Rows are ordered by edge, then a in
/// input order, then measure in input order.
std::vector<RegionRow> region_report(const ModelSpec& model, double gamma, double beta_tilde,
                                     std::span<const double> a_list, std::span<const Measure> measures,
                                     const RegionOptions& opts);

}  // namespace xycorr
