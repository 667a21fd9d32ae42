#pragma once

// Dense complex linear algebra for multi-qubit operators.
//
// Qubit ordering follows the Kronecker convention: site 0 is the most
// significant bit of a basis index, so in tensor_product(a, b) the left
// factor is the slower-varying index.

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xycorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// Raised when a numerical contract (hermiticity, positivity, convergence)
/// is violated by an input or cannot be met by an algorithm.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square Hermitian matrix on a 2^n dimensional space.
///
/// Construction checks the Frobenius asymmetry ||A - A^H|| against 1e-8
/// (relative to max(1, ||A||)) and then stores the exactly Hermitian part
/// (A + A^H) / 2.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(CMatrix m);

  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
  [[nodiscard]] const CMatrix& matrix() const& { return m_; }
  [[nodiscard]] CMatrix matrix() && { return std::move(m_); }

  [[nodiscard]] HermitianOperator operator+(const HermitianOperator& o) const;
  [[nodiscard]] HermitianOperator operator-(const HermitianOperator& o) const;
  [[nodiscard]] HermitianOperator operator*(double s) const;

 private:
  CMatrix m_;
};

/// Unit-trace positive Hermitian matrix.
///
/// Hermiticity and the trace (within 1e-10) are always validated. The
/// spectrum is checked against -1e-9 for dimensions up to 256; larger states
/// are only produced by constructions that are positive by design (thermal
/// states, unitary evolution, dephasing).
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(CMatrix m);

  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
  [[nodiscard]] const CMatrix& matrix() const& { return m_; }
  [[nodiscard]] CMatrix matrix() && { return std::move(m_); }
  [[nodiscard]] HermitianOperator as_hermitian() const { return HermitianOperator(m_); }

  /// Maximally mixed state I/dim.
  static DensityOperator maximally_mixed(Eigen::Index dim);
  /// |psi><psi| for a (not necessarily normalized) vector.
  static DensityOperator pure(const CVector& psi);

 private:
  CMatrix m_;
};

/// Eigen-decomposition of a Hermitian operator: ascending values and the
/// unitary matrix of eigenvector columns.
struct EigenSystem {
  RVector values;
  CMatrix vectors;

  [[nodiscard]] Eigen::Index dim() const { return values.size(); }
  /// V diag(f(lambda)) V^H.
  template <class F>
  [[nodiscard]] CMatrix apply(F&& f) const {
    CVector d(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) d(k) = f(values(k));
    return vectors * d.asDiagonal() * vectors.adjoint();
  }
};

enum class Subsystem { first, second };

namespace pauli {
const Eigen::Matrix2cd& identity();
const Eigen::Matrix2cd& x();
const Eigen::Matrix2cd& y();
const Eigen::Matrix2cd& z();
/// Index 0..3 maps to I, x, y, z.
const Eigen::Matrix2cd& by_index(int k);
}  // namespace pauli

/// Number of qubits n for dim = 2^n; throws std::invalid_argument otherwise.
int qubit_count(Eigen::Index dim);

CMatrix kron(const CMatrix& a, const CMatrix& b);
HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// Trace out every site not in `keep`. The kept sites appear in ascending
/// site order in the result.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep, int num_sites);

/// Partial transpose of a two-qubit operator on the given factor.
HermitianOperator partial_transpose(const HermitianOperator& rho, Subsystem transposed);
HermitianOperator partial_transpose(const DensityOperator& rho, Subsystem transposed);

EigenSystem hermitian_eigensystem(const HermitianOperator& a);
/// Checked entry point for raw matrices; throws NumericalError when the
/// Frobenius asymmetry exceeds 1e-8.
EigenSystem hermitian_eigensystem(const CMatrix& a);

/// -sum p log2 p over a probability-like vector, with p < 1e-15 contributing 0.
double shannon_bits(std::span<const double> p);
double von_neumann_entropy(const DensityOperator& rho);
/// Entropy of a raw Hermitian matrix's spectrum, applying the state clamp
/// rules (eigenvalues in [-1e-9, 0) become 0; below that throws).
double entropy_of_spectrum(const RVector& eigenvalues);

/// Clamp eigenvalues in [-1e-9, 0) to zero and renormalize; throws
/// NumericalError for anything more negative.
RVector clamp_spectrum(RVector eigenvalues);

}  // namespace xycorr
