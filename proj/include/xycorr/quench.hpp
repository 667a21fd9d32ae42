#pragma once

// Finite-lattice thermal states and field-quench dynamics.
//
// The production path (SectorSpectrum, FiniteEquilibrium, QuenchEngine)
// works inside the two phase-flip sectors, where H is real symmetric, and
// evaluates the seven parity-even Pauli pairs of an edge directly in the
// post-quench eigenbasis. The generic dense functions (thermal_state,
// evolve_state, diagonal_ensemble) operate on full DensityOperators and are
// meant for small systems and cross-checks.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xycorr/lattice.hpp"
#include "xycorr/linalg.hpp"
#include "xycorr/measures.hpp"
#include "xycorr/reduced_states.hpp"

namespace xycorr {

struct QuenchProtocol {
  SpinLattice lattice;
  double J = 1.0;
  double gamma = 0.5;
  double beta_tilde = 20.0;
  double a_tilde = 0.0;
  double h_final_tilde = 0.0;
  double t_min = 20.0;
  double t_max = 120.0;
  int num_samples = 500;

  /// Throws std::invalid_argument on t_max <= t_min, t_min < 0,
  /// num_samples < 2, beta_tilde < 0 or J == 0.
  void validate() const;
  /// Uniform grid of num_samples points on [t_min, t_max].
  [[nodiscard]] std::vector<double> times() const;
  /// Same spacing, extended to [t_min, 2 t_max - t_min]; the first
  /// num_samples points coincide with times().
  [[nodiscard]] std::vector<double> doubled_times() const;
};

struct MeasureSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string measure_name;
  double mean = 0.0;
  double std_dev = 0.0;
};

struct Moments {
  double mean = 0.0;
  double std_dev = 0.0;
};

/// Arithmetic mean and population standard deviation.
Moments long_time_average(const MeasureSeries& series);
Moments moments(std::span<const double> values);
MeasureSeries make_series(std::vector<double> times, std::vector<double> values, std::string name);

DensityOperator thermal_state(const HermitianOperator& h, double beta);
DensityOperator evolve_state(const DensityOperator& rho0, const EigenSystem& h_post, double t);
/// Dephasing in the eigenbasis of h_post; eigenvalues within a relative
/// 1e-10 are treated as one eigenspace.
DensityOperator diagonal_ensemble(const DensityOperator& rho0, const EigenSystem& h_post);

/// Eigen-decomposition of H in both phase-flip sectors.
class SectorSpectrum {
 public:
  struct Sector {
    std::vector<std::uint32_t> basis;
    RVector values;
    RMatrix vectors;
  };

  SectorSpectrum(const SpinLattice& lattice, const ModelParams& params);

  [[nodiscard]] int num_sites() const { return num_sites_; }
  [[nodiscard]] const Sector& sector(int parity) const { return sectors_[static_cast<std::size_t>(parity)]; }
  [[nodiscard]] double ground_energy() const;

 private:
  int num_sites_ = 0;
  std::array<Sector, 2> sectors_;
};

/// The seven parity-even Pauli pairs on an edge, as (a, b) indices into
/// I, x, y, z: zI, Iz, zz, xx, yy, xy, yx.
const std::array<std::pair<int, int>, 7>& parity_even_pairs();

/// Columns of O V where O = sigma^a_i sigma^b_j restricted to a sector, with
/// the overall factor split off: O = phase * (real signed permutation);
/// returns the real part and sets `imaginary` when phase = i.
RMatrix apply_pauli_pair(const SectorSpectrum::Sector& sector, int num_sites, const Edge& edge, int a, int b,
                         const RMatrix& vectors, bool& imaginary);

/// Canonical states of a fixed Hamiltonian, with edge RDMs available for any
/// inverse temperature in O(dim) after an O(dim^2) per-edge setup.
class FiniteEquilibrium {
 public:
  FiniteEquilibrium(const SpinLattice& lattice, const ModelParams& params);

  [[nodiscard]] TwoQubitState edge_state(const Edge& edge, double beta) const;
  [[nodiscard]] const SectorSpectrum& spectrum() const { return spectrum_; }

 private:
  struct EdgeData {
    Edge edge;
    std::array<RVector, 7> diagonal;  // <n|O_k|n> over both sectors
  };
  const EdgeData& data_for(const Edge& edge) const;

  SpinLattice lattice_;
  SectorSpectrum spectrum_;
  RVector energies_;
  mutable std::vector<EdgeData> cache_;
};

/// Quench from the canonical state of H(a_tilde) at beta_tilde to evolution
/// under H(h_final_tilde).
class QuenchEngine {
 public:
  explicit QuenchEngine(const QuenchProtocol& protocol);

  /// Pauli expansions of the edge RDM at each time, followed by the
  /// infinite-time (dephased) expansion as the last element.
  [[nodiscard]] std::vector<Eigen::Matrix4d> edge_expansions(const Edge& edge, std::span<const double> times) const;

  [[nodiscard]] TwoQubitState edge_state(const Edge& edge, double t) const;
  [[nodiscard]] const QuenchProtocol& protocol() const { return protocol_; }
  [[nodiscard]] const SectorSpectrum& post_spectrum() const { return post_; }

 private:
  QuenchProtocol protocol_;
  SectorSpectrum post_;
  std::array<RMatrix, 2> rotated_rho0_;
};

/// Per-edge, per-measure result of a quench run with the doubled-window
/// convergence check.
struct QuenchSeriesResult {
  Edge edge;
  Measure measure = Measure::concurrence;
  MeasureSeries series;          // [t_min, t_max]
  Moments doubled_window;        // [t_min, 2 t_max - t_min]
  double dephased_value = 0.0;   // measure of the diagonal-ensemble RDM
  bool converged = true;
  std::string structure_warning; // X-state violations at t_max, if any
};

struct QuenchOptions {
  bool doubled_window_check = true;
  OptimizerOptions optimizer;
  /// Threads used for per-sample measure evaluation.
  int workers = 1;
};

std::vector<QuenchSeriesResult> run_quench(const QuenchProtocol& protocol, std::span<const Edge> edges,
                                           std::span<const Measure> measures, const QuenchOptions& opts = {});

MeasureSeries measure_time_series(const QuenchProtocol& protocol, const Edge& edge, Measure measure);

/// Convergence rule: window means must differ by less than
/// max(0.005, std_dev / sqrt(num_samples)).
bool window_converged(const Moments& base, const Moments& doubled, int num_samples);

}  // namespace xycorr
