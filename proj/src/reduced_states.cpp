#include "xycorr/reduced_states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace xycorr {

namespace {
constexpr double kNegativeEigenTol = 1e-9;
constexpr double kEquilibriumStructureTol = 1e-8;
constexpr double kMagnetizationMismatchTol = 1e-6;
constexpr double kTransientStructureTol = 1e-6;
}  // namespace

Eigen::Matrix4cd pauli_pair(int a, int b) {
  const auto& pa = pauli::by_index(a);
  const auto& pb = pauli::by_index(b);
  Eigen::Matrix4cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
  return m;
}

Eigen::Matrix4d pauli_expansion(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4d c;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) c(a, b) = (rho * pauli_pair(a, b)).trace().real();
  return c;
}

Eigen::Matrix4cd state_from_expansion(const Eigen::Matrix4d& c) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (c(a, b) != 0.0) m += c(a, b) * pauli_pair(a, b);
    }
  return 0.25 * m;
}

DensityOperator sanitize(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("sanitize: matrix must be square");
  if ((rho - rho.adjoint()).norm() > 1e-8) throw NumericalError("sanitize: input is not Hermitian within 1e-8");
  const CMatrix h = (rho + rho.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  RVector w = es.eigenvalues();
  bool clipped = false;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) < 0.0) {
      if (w(k) < -kNegativeEigenTol) {
        std::ostringstream os;
        os << "sanitize: eigenvalue " << w(k) << " is below -1e-9";
        throw NumericalError(os.str());
      }
      w(k) = 0.0;
      clipped = true;
    }
  }
  const double tr = w.sum();
  if (tr <= 0.0) throw NumericalError("sanitize: zero trace");
  if (!clipped && std::abs(tr - 1.0) < 1e-14) {
    return DensityOperator(h);
  }
  w /= tr;
  CMatrix out = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return DensityOperator((out + out.adjoint()) * 0.5);
}

Eigen::Matrix4cd sanitize4(const Eigen::Matrix4cd& rho) {
  return Eigen::Matrix4cd(sanitize(CMatrix(rho)).matrix());
}

TwoQubitState::TwoQubitState(const Eigen::Matrix4cd& rho, StateSource source)
    : rho_(sanitize4(rho)), source_(source) {}

TwoQubitState::TwoQubitState(const DensityOperator& rho, StateSource source) : source_(source) {
  if (rho.dim() != 4) throw std::invalid_argument("TwoQubitState: expected a 4x4 state");
  rho_ = sanitize4(Eigen::Matrix4cd(rho.matrix()));
}

DensityOperator reduce_to_sites(const DensityOperator& rho, std::span<const int> sites, int num_sites) {
  if (sites.empty() || sites.size() > 2) throw std::invalid_argument("reduce_to_sites: one or two sites expected");
  for (int s : sites) {
    if (s < 0 || s >= num_sites) throw std::out_of_range("reduce_to_sites: site index out of range");
  }
  if (sites.size() == 2 && sites[0] == sites[1]) throw std::invalid_argument("reduce_to_sites: duplicate site");
  DensityOperator r = partial_trace(rho, sites, num_sites);
  if (sites.size() == 2 && sites[0] > sites[1]) {
    // partial_trace returns ascending site order; restore (i, j).
    return DensityOperator(CMatrix(swap_qubits(Eigen::Matrix4cd(r.matrix()))));
  }
  return r;
}

Eigen::Matrix4cd swap_qubits(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd out;
  auto sw = [](int k) { return ((k & 1) << 1) | (k >> 1); };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(sw(r), sw(c)) = rho(r, c);
  return out;
}

TwoSiteObservables correlators_from_state(const TwoQubitState& rho) {
  const Eigen::Matrix4d c = pauli_expansion(rho.matrix());
  const double mz_a = c(3, 0);
  const double mz_b = c(0, 3);
  if (rho.source() == StateSource::equilibrium && std::abs(mz_a - mz_b) > kMagnetizationMismatchTol) {
    std::ostringstream os;
    os << "correlators_from_state: site magnetizations differ (" << mz_a << " vs " << mz_b << ")";
    throw NumericalError(os.str());
  }
  TwoSiteObservables o;
  o.mz = mz_a;
  o.txx = c(1, 1);
  o.tyy = c(2, 2);
  o.tzz = c(3, 3);
  o.txy = c(1, 2);
  return o;
}

TwoQubitState state_from_observables(const TwoSiteObservables& o, StateSource source) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 0) = 1.0;
  c(3, 0) = o.mz;
  c(0, 3) = o.mz;
  c(1, 1) = o.txx;
  c(2, 2) = o.tyy;
  c(3, 3) = o.tzz;
  c(1, 2) = o.txy;
  c(2, 1) = o.txy;
  return TwoQubitState(state_from_expansion(c), source);
}

StructureReport structure_report(const TwoQubitState& rho) {
  const Eigen::Matrix4d c = pauli_expansion(rho.matrix());
  StructureReport r;
  r.max_xz_yz = std::max({std::abs(c(1, 3)), std::abs(c(3, 1)), std::abs(c(2, 3)), std::abs(c(3, 2))});
  r.txy_asym = std::max(std::abs(c(1, 2)), std::abs(c(2, 1)));
  r.max_mx_my = std::max({std::abs(c(1, 0)), std::abs(c(2, 0)), std::abs(c(0, 1)), std::abs(c(0, 2))});
  r.mz_mismatch = std::abs(c(3, 0) - c(0, 3));
  return r;
}

std::string check_structure(const TwoQubitState& rho) {
  const StructureReport r = structure_report(rho);
  const bool eq = rho.source() == StateSource::equilibrium;
  const double tol = eq ? kEquilibriumStructureTol : kTransientStructureTol;
  std::ostringstream os;
  if (r.max_xz_yz > tol) os << "xz/yz correlation " << r.max_xz_yz << "; ";
  if (r.max_mx_my > tol) os << "transverse-plane magnetization " << r.max_mx_my << "; ";
  if (eq && r.txy_asym > tol) os << "xy correlation " << r.txy_asym << "; ";
  const std::string msg = os.str();
  if (eq && !msg.empty()) throw NumericalError("equilibrium state violates X-state structure: " + msg);
  return msg;
}

}  // namespace xycorr
