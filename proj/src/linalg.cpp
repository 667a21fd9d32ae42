#include "xycorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace xycorr {

namespace {

constexpr double kAsymmetryTol = 1e-8;
constexpr double kTraceTol = 1e-10;
constexpr double kNegativeEigenTol = 1e-9;
constexpr Eigen::Index kPositivityCheckMaxDim = 256;

double asymmetry(const CMatrix& m) {
  return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

HermitianOperator::HermitianOperator(CMatrix m) {
  require_square(m, "HermitianOperator");
  if (const double a = asymmetry(m); a > kAsymmetryTol) {
    std::ostringstream os;
    os << "HermitianOperator: Frobenius asymmetry " << a << " exceeds " << kAsymmetryTol;
    throw NumericalError(os.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  return HermitianOperator(m_ + o.m_);
}
HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  return HermitianOperator(m_ - o.m_);
}
HermitianOperator HermitianOperator::operator*(double s) const { return HermitianOperator(m_ * s); }

DensityOperator::DensityOperator(CMatrix m) {
  require_square(m, "DensityOperator");
  if (const double a = asymmetry(m); a > kAsymmetryTol) {
    std::ostringstream os;
    os << "DensityOperator: Frobenius asymmetry " << a;
    throw NumericalError(os.str());
  }
  m = (m + m.adjoint()) * 0.5;
  if (const double tr = m.trace().real(); std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr << " differs from 1";
    throw NumericalError(os.str());
  }
  if (m.rows() <= kPositivityCheckMaxDim) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -kNegativeEigenTol) {
      std::ostringstream os;
      os << "DensityOperator: negative eigenvalue " << es.eigenvalues()(0);
      throw NumericalError(os.str());
    }
  }
  m_ = std::move(m);
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return DensityOperator(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::pure(const CVector& psi) {
  const CVector v = psi.normalized();
  return DensityOperator(v * v.adjoint());
}

namespace pauli {
namespace {
Eigen::Matrix2cd make(Complex a, Complex b, Complex c, Complex d) {
  Eigen::Matrix2cd m;
  m << a, b, c, d;
  return m;
}
}  // namespace

const Eigen::Matrix2cd& identity() {
  static const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  return m;
}
const Eigen::Matrix2cd& x() {
  static const Eigen::Matrix2cd m = make(0, 1, 1, 0);
  return m;
}
const Eigen::Matrix2cd& y() {
  static const Eigen::Matrix2cd m = make(0, Complex(0, -1), Complex(0, 1), 0);
  return m;
}
const Eigen::Matrix2cd& z() {
  static const Eigen::Matrix2cd m = make(1, 0, 0, -1);
  return m;
}
const Eigen::Matrix2cd& by_index(int k) {
  switch (k) {
    case 0: return identity();
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default: throw std::out_of_range("pauli::by_index: index must be 0..3");
  }
}
}  // namespace pauli

int qubit_count(Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep, int num_sites) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  if (num_sites < 1 || rho.dim() != (Eigen::Index{1} << num_sites)) {
    throw std::invalid_argument("partial_trace: dimension does not match 2^num_sites");
  }
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace: duplicate site in keep set");
  }
  for (int s : kept) {
    if (s < 0 || s >= num_sites) throw std::out_of_range("partial_trace: site index out of range");
  }
  std::vector<int> traced;
  for (int s = 0; s < num_sites; ++s) {
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);
  }

  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  auto bit_of = [num_sites](int site) { return std::size_t{1} << (num_sites - 1 - site); };

  // Scatter tables: kept-local index -> global bits, traced-local index -> global bits.
  std::vector<std::size_t> kept_bits(std::size_t{1} << nk, 0);
  for (std::size_t k = 0; k < kept_bits.size(); ++k) {
    for (int b = 0; b < nk; ++b) {
      if (k & (std::size_t{1} << (nk - 1 - b))) kept_bits[k] |= bit_of(kept[b]);
    }
  }
  std::vector<std::size_t> traced_bits(std::size_t{1} << nt, 0);
  for (std::size_t k = 0; k < traced_bits.size(); ++k) {
    for (int b = 0; b < nt; ++b) {
      if (k & (std::size_t{1} << (nt - 1 - b))) traced_bits[k] |= bit_of(traced[b]);
    }
  }

  const auto& m = rho.matrix();
  const auto dk = static_cast<Eigen::Index>(kept_bits.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc = 0;
      for (std::size_t e : traced_bits) {
        acc += m(static_cast<Eigen::Index>(kept_bits[r] | e), static_cast<Eigen::Index>(kept_bits[c] | e));
      }
      out(r, c) = acc;
    }
  }
  return DensityOperator(std::move(out));
}

HermitianOperator partial_transpose(const HermitianOperator& rho, Subsystem transposed) {
  if (rho.dim() != 4) throw std::invalid_argument("partial_transpose: expected a two-qubit (4x4) operator");
  const auto& m = rho.matrix();
  CMatrix out(4, 4);
  // Index (a b) with a the first qubit; swap the transposed qubit's row/col bit.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const int row = 2 * a + b;
          const int col = 2 * c + d;
          if (transposed == Subsystem::first) {
            out(2 * c + b, 2 * a + d) = m(row, col);
          } else {
            out(2 * a + d, 2 * c + b) = m(row, col);
          }
        }
  return HermitianOperator(std::move(out));
}

HermitianOperator partial_transpose(const DensityOperator& rho, Subsystem transposed) {
  return partial_transpose(rho.as_hermitian(), transposed);
}

EigenSystem hermitian_eigensystem(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigensystem: solver failed");
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

EigenSystem hermitian_eigensystem(const CMatrix& a) {
  require_square(a, "hermitian_eigensystem");
  if ((a - a.adjoint()).norm() > kAsymmetryTol) {
    throw NumericalError("hermitian_eigensystem: input is not Hermitian");
  }
  return hermitian_eigensystem(HermitianOperator(a));
}

double shannon_bits(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (v > 1e-15) s -= v * std::log2(v);
  }
  return s;
}

RVector clamp_spectrum(RVector eigenvalues) {
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    if (eigenvalues(k) < 0.0) {
      if (eigenvalues(k) < -kNegativeEigenTol) {
        std::ostringstream os;
        os << "eigenvalue " << eigenvalues(k) << " below the clamp window";
        throw NumericalError(os.str());
      }
      eigenvalues(k) = 0.0;
    }
  }
  const double total = eigenvalues.sum();
  if (total <= 0.0) throw NumericalError("spectrum has no positive weight");
  return eigenvalues / total;
}

double entropy_of_spectrum(const RVector& eigenvalues) {
  const RVector p = clamp_spectrum(eigenvalues);
  return shannon_bits(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(es.eigenvalues());
}

}  // namespace xycorr
