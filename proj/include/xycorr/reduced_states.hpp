#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "xycorr/linalg.hpp"
#include "xycorr/observables.hpp"

namespace xycorr {

enum class StateSource {
  generic,
  /// RDM of a canonical equilibrium state; the X-state structure is exact.
  equilibrium,
  /// RDM of a time-evolved state; structure holds only asymptotically.
  evolved,
  /// Rebuilt from TwoSiteObservables.
  analytic_reconstruction,
};

/// A two-qubit density matrix, first qubit = site A, second = site B.
class TwoQubitState {
 public:
  TwoQubitState() = default;
  /// Validates via sanitize(); throws NumericalError for invalid input.
  TwoQubitState(const Eigen::Matrix4cd& rho, StateSource source);
  TwoQubitState(const DensityOperator& rho, StateSource source);

  [[nodiscard]] const Eigen::Matrix4cd& matrix() const { return rho_; }
  [[nodiscard]] StateSource source() const { return source_; }
  [[nodiscard]] DensityOperator density() const { return DensityOperator(CMatrix(rho_)); }

 private:
  Eigen::Matrix4cd rho_ = Eigen::Matrix4cd::Identity() * 0.25;
  StateSource source_ = StateSource::generic;
};

/// sigma^a (x) sigma^b for a, b in 0..3 (I, x, y, z).
Eigen::Matrix4cd pauli_pair(int a, int b);

/// Full Pauli expansion c(a, b) = tr[rho sigma^a (x) sigma^b]; c(0, 0) = 1.
Eigen::Matrix4d pauli_expansion(const Eigen::Matrix4cd& rho);
/// Inverse of pauli_expansion: (1/4) sum c(a, b) sigma^a (x) sigma^b.
Eigen::Matrix4cd state_from_expansion(const Eigen::Matrix4d& c);

/// Partial trace onto one or two sites, keeping the requested order.
DensityOperator reduce_to_sites(const DensityOperator& rho, std::span<const int> sites, int num_sites);

/// Reads (M^z, T^xx, T^yy, T^zz, T^xy). For equilibrium sources the two
/// single-site magnetizations must agree within 1e-6.
TwoSiteObservables correlators_from_state(const TwoQubitState& rho);

/// Builds the two-site matrix from observables (X-state form plus the
/// symmetric xy term). Throws NumericalError if the result has an
/// eigenvalue below -1e-9.
TwoQubitState state_from_observables(const TwoSiteObservables& o,
                                     StateSource source = StateSource::analytic_reconstruction);

/// Hermitian part with eigenvalues in [-1e-9, 0) clipped to zero and unit
/// trace restored. Idempotent on valid states.
DensityOperator sanitize(const CMatrix& rho);
Eigen::Matrix4cd sanitize4(const Eigen::Matrix4cd& rho);

/// Largest entries that must vanish by symmetry.
struct StructureReport {
  double max_xz_yz = 0.0;   // |T^xz|, |T^zx|, |T^yz|, |T^zy|
  double txy_asym = 0.0;    // |T^xy|, |T^yx|
  double max_mx_my = 0.0;   // single-site |M^x|, |M^y|
  double mz_mismatch = 0.0; // |M^z_A - M^z_B|
};

StructureReport structure_report(const TwoQubitState& rho);

/// Enforces the X-state structure: hard error for equilibrium sources
/// (|T^xz|, |T^yz|, |T^xy|, |M^x|, |M^y| < 1e-8); for other sources returns
/// a warning message (empty when the structure holds within 1e-6).
std::string check_structure(const TwoQubitState& rho);

/// Exchange the two qubits.
Eigen::Matrix4cd swap_qubits(const Eigen::Matrix4cd& rho);

}  // namespace xycorr
