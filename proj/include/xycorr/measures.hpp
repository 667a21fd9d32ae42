#pragma once

// Two-qubit correlation measures. Entropies are in bits; entanglement
// measures in ebits.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xycorr/reduced_states.hpp"

namespace xycorr {

/// Rank-one projective measurement {B1 = |v><v|, B2 = I - B1} with
/// |v> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;

  [[nodiscard]] std::array<Eigen::Matrix2cd, 2> projectors() const;
};

struct OptimizerOptions {
  int grid_theta = 90;
  int grid_phi = 180;
  double angle_tol = 1e-6;
  int max_cycles = 60;
};

struct OptimizerInfo {
  MeasurementBasis best;
  int grid_theta = 0;
  int grid_phi = 0;
  int refinement_iterations = 0;
  double grid_value = 0.0;
  bool converged = true;
};

struct MeasureResult {
  double value = 0.0;
  std::optional<OptimizerInfo> optimizer;
};

enum class Party { first, second };

double concurrence(const TwoQubitState& rho);
double log_negativity(const TwoQubitState& rho);
/// Negativity: |sum of negative eigenvalues of the partial transpose|.
double negativity(const TwoQubitState& rho);
double mutual_information(const TwoQubitState& rho);

/// Post-measurement average entropy sum_i p_i S(rho_{A|i}) for a fixed
/// measurement on the second qubit.
double conditional_entropy(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis);
/// Entropy of the state dephased by a fixed measurement on the second qubit.
double dephased_entropy(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis);

/// min over projective measurements on `measured` of the conditional entropy
/// of the other party.
MeasureResult min_conditional_entropy(const TwoQubitState& rho, Party measured = Party::second,
                                      const OptimizerOptions& opts = {});
MeasureResult classical_correlation(const TwoQubitState& rho, Party measured = Party::second,
                                    const OptimizerOptions& opts = {});
MeasureResult discord(const TwoQubitState& rho, Party measured = Party::second, const OptimizerOptions& opts = {});
/// One-way work-deficit: min over measurements on the second party of
/// S(dephased) - S(rho).
MeasureResult work_deficit(const TwoQubitState& rho, const OptimizerOptions& opts = {});

enum class Measure { concurrence, log_negativity, discord, work_deficit, mutual_information, classical_correlation };

/// Short identifiers C, EN, Q, WD, I, J.
std::string_view short_name(Measure m);
Measure parse_measure(std::string_view name);
std::vector<Measure> parse_measure_list(std::string_view csv);

double evaluate(Measure m, const TwoQubitState& rho, const OptimizerOptions& opts = {});
MeasureResult evaluate_detailed(Measure m, const TwoQubitState& rho, const OptimizerOptions& opts = {});

}  // namespace xycorr
