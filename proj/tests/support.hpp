#pragma once

// Shared fixtures and independent oracles for the test binaries. Nothing
// here calls into the library routine it is used to check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "xycorr/lattice.hpp"
#include "xycorr/linalg.hpp"
#include "xycorr/reduced_states.hpp"

namespace xytest {

using xycorr::CMatrix;
using xycorr::Complex;
using Eigen::Matrix4cd;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240917);
  return gen;
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline CMatrix ginibre(Eigen::Index n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng()), g(rng()));
  return m;
}

/// Random full-rank mixed state (Ginibre ensemble).
inline CMatrix random_state(Eigen::Index n) {
  const CMatrix g = ginibre(n);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) * 0.5;
}

inline CMatrix random_hermitian(Eigen::Index n) {
  const CMatrix g = ginibre(n);
  return (g + g.adjoint()) * 0.5;
}

/// Haar-ish unitary from the QR decomposition of a Ginibre matrix.
inline CMatrix random_unitary(Eigen::Index n) {
  Eigen::HouseholderQR<CMatrix> qr(ginibre(n));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

inline Matrix4cd singlet() {
  Eigen::Vector4cd psi(0, 1, -1, 0);
  psi /= std::sqrt(2.0);
  return psi * psi.adjoint();
}

inline Matrix4cd werner(double p) { return p * singlet() + (1 - p) * Matrix4cd::Identity() / 4.0; }

inline Matrix4cd classical_correlated() {
  Matrix4cd m = Matrix4cd::Zero();
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  return m;
}

inline Eigen::Matrix2cd qubit_state(double rx, double ry, double rz) {
  Eigen::Matrix2cd m;
  m << 1 + rz, Complex(rx, -ry), Complex(rx, ry), 1 - rz;
  return m / 2.0;
}

inline Matrix4cd kron4(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Random X-state with the model's symmetric structure: populations
/// a, b, b, d and coherences z (|00>,|11>) and w (|01>,|10>), all real.
inline Matrix4cd random_x_state() {
  for (;;) {
    double a = uniform(), b = uniform(), d = uniform();
    const double s = a + 2 * b + d;
    a /= s;
    b /= s;
    d /= s;
    const double z = uniform(-1, 1) * std::sqrt(a * d);
    const double w = uniform(-1, 1) * b;
    Matrix4cd m = Matrix4cd::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = b;
    m(3, 3) = d;
    m(0, 3) = m(3, 0) = z;
    m(1, 2) = m(2, 1) = w;
    if (Eigen::SelfAdjointEigenSolver<Matrix4cd>(m).eigenvalues().minCoeff() > 1e-9) return m;
  }
}

/// Random Bell-diagonal state (1/4)(I + sum c_k sigma_k sigma_k).
inline Matrix4cd random_bell_diagonal() {
  double w[4], s = 0;
  for (double& x : w) s += (x = -std::log(uniform(1e-12, 1.0)));
  const Eigen::Vector4cd phi_p(1, 0, 0, 1), phi_m(1, 0, 0, -1), psi_p(0, 1, 1, 0), psi_m(0, 1, -1, 0);
  return (w[0] * phi_p * phi_p.adjoint() + w[1] * phi_m * phi_m.adjoint() + w[2] * psi_p * psi_p.adjoint() +
          w[3] * psi_m * psi_m.adjoint()) /
         (2.0 * s);
}

inline double entropy_bits(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

/// Closed-form entropy of a 2x2 Hermitian unit-trace matrix.
inline double entropy2(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real(), d = m(1, 1).real();
  const double disc = std::sqrt((a - d) * (a - d) + 4 * std::norm(m(0, 1)));
  double s = 0;
  for (double p : {(a + d + disc) / 2, (a + d - disc) / 2}) {
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

/// Reduced state of the first qubit, by explicit index summation.
inline Eigen::Matrix2cd trace_second(const Matrix4cd& m) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r(i, j) += m(2 * i + k, 2 * j + k);
  return r;
}

inline Eigen::Matrix2cd trace_first(const Matrix4cd& m) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r(i, j) += m(2 * k + i, 2 * k + j);
  return r;
}

/// Post-measurement conditional entropy of A for a projective measurement
/// on B along (theta, phi), computed from scratch.
inline double oracle_conditional_entropy(const Matrix4cd& rho, double theta, double phi) {
  Eigen::Vector2cd v(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  const Eigen::Matrix2cd p1 = v * v.adjoint();
  const Eigen::Matrix2cd p2 = Eigen::Matrix2cd::Identity() - p1;
  double s = 0;
  for (const auto& p : {p1, p2}) {
    const Matrix4cd proj = kron4(Eigen::Matrix2cd::Identity(), p);
    const Matrix4cd post = proj * rho * proj;
    const double prob = post.trace().real();
    if (prob > 1e-14) s += prob * entropy2(trace_second(post) / prob);
  }
  return s;
}

inline double oracle_dephased_entropy(const Matrix4cd& rho, double theta, double phi) {
  Eigen::Vector2cd v(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  const Eigen::Matrix2cd p1 = v * v.adjoint();
  const Eigen::Matrix2cd p2 = Eigen::Matrix2cd::Identity() - p1;
  Matrix4cd out = Matrix4cd::Zero();
  for (const auto& p : {p1, p2}) {
    const Matrix4cd proj = kron4(Eigen::Matrix2cd::Identity(), p);
    out += proj * rho * proj;
  }
  return entropy_bits(out);
}

/// Minimum over an exhaustive (theta, phi) grid with the given step (degrees).
template <class F>
double exhaustive_min(F&& f, double step_deg) {
  const double step = step_deg * M_PI / 180.0;
  const int nt = static_cast<int>(std::lround(180.0 / step_deg));
  const int np = static_cast<int>(std::lround(360.0 / step_deg));
  double best = 1e300;
  for (int i = 0; i <= nt; ++i) {
    for (int j = 0; j < np; ++j) {
      best = std::min(best, f(i * step, j * step));
      if (i == 0 || i == nt) break;
    }
  }
  return best;
}

inline double oracle_discord(const Matrix4cd& rho, double step_deg) {
  const double mi = entropy_bits(trace_second(rho)) + entropy_bits(trace_first(rho)) - entropy_bits(rho);
  const double cond = exhaustive_min([&](double t, double p) { return oracle_conditional_entropy(rho, t, p); }, step_deg);
  return mi - (entropy_bits(trace_second(rho)) - cond);
}

/// Two-site RDM by explicit summation over all basis indices.
inline CMatrix brute_force_rdm(const CMatrix& rho, int num_sites, int si, int sj) {
  CMatrix out = CMatrix::Zero(4, 4);
  const int dim = 1 << num_sites;
  auto bit = [&](int s, int site) { return (s >> (num_sites - 1 - site)) & 1; };
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      bool same_rest = true;
      for (int k = 0; k < num_sites && same_rest; ++k) {
        if (k != si && k != sj && bit(r, k) != bit(c, k)) same_rest = false;
      }
      if (!same_rest) continue;
      out(2 * bit(r, si) + bit(r, sj), 2 * bit(c, si) + bit(c, sj)) += rho(r, c);
    }
  }
  return out;
}

/// exp(-beta H) / Z through the matrix exponential.
inline CMatrix oracle_thermal(const CMatrix& h, double beta) {
  const double shift = Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  const CMatrix shifted = h - shift * CMatrix::Identity(h.rows(), h.cols());
  CMatrix m = (-beta * shifted).exp();
  return m / m.trace();
}

inline CMatrix oracle_propagator(const CMatrix& h, double t) {
  return (Complex(0, -t) * h).exp();
}

}  // namespace xytest
