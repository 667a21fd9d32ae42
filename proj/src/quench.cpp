#include "xycorr/quench.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "xycorr/parallel.hpp"

namespace xycorr {

namespace {

constexpr double kDegeneracyTol = 1e-10;

// Boltzmann weights exp(-beta (E - e0)), unnormalized.
RVector boltzmann(const RVector& energies, double beta, double e0) {
  return (-beta * (energies.array() - e0)).exp().matrix();
}

// Contiguous groups of (sorted) eigenvalues equal within the relative tolerance.
std::vector<std::pair<Eigen::Index, Eigen::Index>> degenerate_groups(const RVector& sorted, double scale) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> groups;
  const double tol = kDegeneracyTol * std::max(1.0, scale);
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= sorted.size(); ++k) {
    if (k == sorted.size() || sorted(k) - sorted(k - 1) > tol) {
      groups.emplace_back(start, k - start);
      start = k;
    }
  }
  return groups;
}

}  // namespace

// ---------------------------------------------------------------------------
// protocol and series bookkeeping

void QuenchProtocol::validate() const {
  if (!(t_max > t_min) || t_min < 0.0) throw std::invalid_argument("quench protocol requires t_max > t_min >= 0");
  if (num_samples < 2) throw std::invalid_argument("quench protocol requires num_samples >= 2");
  if (beta_tilde < 0.0) throw std::invalid_argument("quench protocol requires beta_tilde >= 0");
  if (J == 0.0) throw std::invalid_argument("quench protocol requires J != 0");
  if (lattice.num_sites < 2) throw std::invalid_argument("quench protocol has no lattice");
}

std::vector<double> QuenchProtocol::times() const {
  std::vector<double> t(static_cast<std::size_t>(num_samples));
  const double dt = (t_max - t_min) / (num_samples - 1);
  for (int k = 0; k < num_samples; ++k) t[static_cast<std::size_t>(k)] = t_min + k * dt;
  t.back() = t_max;
  return t;
}

std::vector<double> QuenchProtocol::doubled_times() const {
  const int n = 2 * num_samples - 1;
  std::vector<double> t(static_cast<std::size_t>(n));
  const double dt = (t_max - t_min) / (num_samples - 1);
  for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = t_min + k * dt;
  t[static_cast<std::size_t>(num_samples - 1)] = t_max;
  return t;
}

Moments moments(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("moments of an empty series");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return Moments{mean, std::sqrt(ss / n)};
}

Moments long_time_average(const MeasureSeries& series) { return moments(series.values); }

MeasureSeries make_series(std::vector<double> times, std::vector<double> values, std::string name) {
  if (times.size() != values.size()) throw std::invalid_argument("series times and values differ in length");
  MeasureSeries s;
  const Moments m = moments(values);
  s.times = std::move(times);
  s.values = std::move(values);
  s.measure_name = std::move(name);
  s.mean = m.mean;
  s.std_dev = m.std_dev;
  return s;
}

bool window_converged(const Moments& base, const Moments& doubled, int num_samples) {
  const double allowed = std::max(0.005, base.std_dev / std::sqrt(static_cast<double>(num_samples)));
  return std::abs(base.mean - doubled.mean) < allowed;
}

// ---------------------------------------------------------------------------
// dense reference implementations

DensityOperator thermal_state(const HermitianOperator& h, double beta) {
  if (beta < 0.0) throw std::invalid_argument("thermal_state: beta must be non-negative");
  const EigenSystem es = hermitian_eigensystem(h);
  RVector w = boltzmann(es.values, beta, es.values.minCoeff());
  w /= w.sum();
  CMatrix rho = es.vectors * w.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  return DensityOperator((rho + rho.adjoint()) * 0.5);
}

DensityOperator evolve_state(const DensityOperator& rho0, const EigenSystem& h_post, double t) {
  if (rho0.dim() != h_post.dim()) throw std::invalid_argument("evolve_state: dimension mismatch");
  if (t == 0.0) return rho0;
  const CMatrix& v = h_post.vectors;
  CMatrix rotated = v.adjoint() * rho0.matrix() * v;
  const Eigen::Index d = rotated.rows();
  CVector phase(d);
  for (Eigen::Index k = 0; k < d; ++k) phase(k) = std::polar(1.0, -h_post.values(k) * t);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) rotated(r, c) *= phase(r) * std::conj(phase(c));
  CMatrix rho = v * rotated * v.adjoint();
  return DensityOperator((rho + rho.adjoint()) * 0.5);
}

DensityOperator diagonal_ensemble(const DensityOperator& rho0, const EigenSystem& h_post) {
  if (rho0.dim() != h_post.dim()) throw std::invalid_argument("diagonal_ensemble: dimension mismatch");
  const CMatrix& v = h_post.vectors;
  const CMatrix rotated = v.adjoint() * rho0.matrix() * v;
  CMatrix dephased = CMatrix::Zero(rotated.rows(), rotated.cols());
  for (const auto& [start, len] : degenerate_groups(h_post.values, h_post.values.cwiseAbs().maxCoeff())) {
    dephased.block(start, start, len, len) = rotated.block(start, start, len, len);
  }
  CMatrix rho = v * dephased * v.adjoint();
  return DensityOperator((rho + rho.adjoint()) * 0.5);
}

// ---------------------------------------------------------------------------
// sector machinery

SectorSpectrum::SectorSpectrum(const SpinLattice& lattice, const ModelParams& params)
    : num_sites_(lattice.num_sites) {
  auto sectors = build_parity_sectors(lattice, params);
  for (int p = 0; p < 2; ++p) {
    auto& src = sectors[static_cast<std::size_t>(p)];
    Eigen::SelfAdjointEigenSolver<RMatrix> es(src.hamiltonian);
    if (es.info() != Eigen::Success) throw NumericalError("sector diagonalization failed");
    src.hamiltonian.resize(0, 0);
    auto& dst = sectors_[static_cast<std::size_t>(p)];
    dst.basis = std::move(src.basis);
    dst.values = es.eigenvalues();
    dst.vectors = es.eigenvectors();
  }
}

double SectorSpectrum::ground_energy() const {
  return std::min(sectors_[0].values.minCoeff(), sectors_[1].values.minCoeff());
}

const std::array<std::pair<int, int>, 7>& parity_even_pairs() {
  static const std::array<std::pair<int, int>, 7> pairs = {
      {{3, 0}, {0, 3}, {3, 3}, {1, 1}, {2, 2}, {1, 2}, {2, 1}}};
  return pairs;
}

RMatrix apply_pauli_pair(const SectorSpectrum::Sector& sector, int num_sites, const Edge& edge, int a, int b,
                         const RMatrix& vectors, bool& imaginary) {
  const std::uint32_t bit_i = std::uint32_t{1} << (num_sites - 1 - edge.i);
  const std::uint32_t bit_j = std::uint32_t{1} << (num_sites - 1 - edge.j);
  std::uint32_t flip = 0;
  if (a == 1 || a == 2) flip |= bit_i;
  if (b == 1 || b == 2) flip |= bit_j;
  const int num_y = (a == 2) + (b == 2);
  if (num_y % 2 != std::popcount(flip) % 2 && std::popcount(flip) % 2 != 0) {
    throw std::invalid_argument("apply_pauli_pair: operator does not preserve the phase-flip sector");
  }
  imaginary = (num_y % 2) == 1;

  const std::size_t dim_full = std::size_t{1} << num_sites;
  std::vector<std::int32_t> local(dim_full, -1);
  for (std::size_t k = 0; k < sector.basis.size(); ++k) local[sector.basis[k]] = static_cast<std::int32_t>(k);

  // Per-site factor on |bit>: x -> 1, y -> i (bit 0) / -i (bit 1), z -> +-1.
  auto site_factor = [](int op, bool down) -> Complex {
    switch (op) {
      case 1: return 1.0;
      case 2: return down ? Complex(0, -1) : Complex(0, 1);
      case 3: return down ? -1.0 : 1.0;
      default: return 1.0;
    }
  };

  RMatrix out(vectors.rows(), vectors.cols());
  for (std::size_t k = 0; k < sector.basis.size(); ++k) {
    const std::uint32_t s = sector.basis[k];
    const Complex coef = site_factor(a, (s & bit_i) != 0) * site_factor(b, (s & bit_j) != 0);
    const double real_coef = imaginary ? coef.imag() : coef.real();
    const std::int32_t target = local[s ^ flip];
    if (target < 0) throw std::invalid_argument("apply_pauli_pair: operator leaves the sector");
    out.row(target) = real_coef * vectors.row(static_cast<Eigen::Index>(k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// equilibrium

FiniteEquilibrium::FiniteEquilibrium(const SpinLattice& lattice, const ModelParams& params)
    : lattice_(lattice), spectrum_(lattice, params) {
  const auto& s0 = spectrum_.sector(0);
  const auto& s1 = spectrum_.sector(1);
  energies_.resize(s0.values.size() + s1.values.size());
  energies_ << s0.values, s1.values;
}

const FiniteEquilibrium::EdgeData& FiniteEquilibrium::data_for(const Edge& edge) const {
  for (const auto& d : cache_) {
    if (d.edge.i == edge.i && d.edge.j == edge.j) return d;
  }
  EdgeData data{edge, {}};
  const auto& pairs = parity_even_pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    RVector diag(energies_.size());
    Eigen::Index offset = 0;
    for (int p = 0; p < 2; ++p) {
      const auto& sec = spectrum_.sector(p);
      bool imaginary = false;
      const RMatrix ov = apply_pauli_pair(sec, lattice_.num_sites, edge, pairs[k].first, pairs[k].second,
                                          sec.vectors, imaginary);
      const Eigen::Index n = sec.values.size();
      if (imaginary) {
        // <n| i A |n> vanishes for real antisymmetric A.
        diag.segment(offset, n).setZero();
      } else {
        diag.segment(offset, n) = sec.vectors.cwiseProduct(ov).colwise().sum().transpose();
      }
      offset += n;
    }
    data.diagonal[k] = std::move(diag);
  }
  cache_.push_back(std::move(data));
  return cache_.back();
}

TwoQubitState FiniteEquilibrium::edge_state(const Edge& edge, double beta) const {
  if (beta < 0.0) throw std::invalid_argument("edge_state: beta must be non-negative");
  const EdgeData& d = data_for(edge);
  RVector w = boltzmann(energies_, beta, energies_.minCoeff());
  w /= w.sum();
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 0) = 1.0;
  const auto& pairs = parity_even_pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) c(pairs[k].first, pairs[k].second) = w.dot(d.diagonal[k]);
  return TwoQubitState(state_from_expansion(c), StateSource::equilibrium);
}

// ---------------------------------------------------------------------------
// quench

QuenchEngine::QuenchEngine(const QuenchProtocol& protocol)
    : protocol_(protocol),
      post_(protocol.lattice, ModelParams{protocol.J, protocol.gamma, protocol.h_final_tilde * protocol.J}) {
  protocol_.validate();
  const SectorSpectrum pre(protocol.lattice, ModelParams{protocol.J, protocol.gamma, protocol.a_tilde * protocol.J});
  // beta_tilde = beta J with energies in units where J enters H directly.
  const double beta = protocol.beta_tilde / std::abs(protocol.J);
  const double e0 = pre.ground_energy();
  double z = 0.0;
  std::array<RVector, 2> weights;
  for (int p = 0; p < 2; ++p) {
    weights[static_cast<std::size_t>(p)] = boltzmann(pre.sector(p).values, beta, e0);
    z += weights[static_cast<std::size_t>(p)].sum();
  }
  for (int p = 0; p < 2; ++p) {
    const auto& vp = pre.sector(p).vectors;
    const RMatrix rho0 = vp * (weights[static_cast<std::size_t>(p)] / z).asDiagonal() * vp.transpose();
    const auto& v = post_.sector(p).vectors;
    rotated_rho0_[static_cast<std::size_t>(p)] = v.transpose() * rho0 * v;
  }
}

std::vector<Eigen::Matrix4d> QuenchEngine::edge_expansions(const Edge& edge, std::span<const double> times) const {
  const auto nt = static_cast<Eigen::Index>(times.size());
  std::vector<Eigen::Matrix4d> out(times.size() + 1, Eigen::Matrix4d::Zero());
  for (auto& c : out) c(0, 0) = 1.0;

  const auto& pairs = parity_even_pairs();
  for (int p = 0; p < 2; ++p) {
    const auto& sec = post_.sector(p);
    const RMatrix& r = rotated_rho0_[static_cast<std::size_t>(p)];
    const Eigen::Index d = sec.values.size();
    RMatrix cosm(d, nt);
    RMatrix sinm(d, nt);
    for (Eigen::Index k = 0; k < nt; ++k) {
      const double t = times[static_cast<std::size_t>(k)];
      for (Eigen::Index m = 0; m < d; ++m) {
        const double ph = sec.values(m) * t;
        cosm(m, k) = std::cos(ph);
        sinm(m, k) = std::sin(ph);
      }
    }
    const auto groups = degenerate_groups(sec.values, sec.values.cwiseAbs().maxCoeff());

    for (std::size_t q = 0; q < pairs.size(); ++q) {
      bool imaginary = false;
      const RMatrix ov = apply_pauli_pair(sec, post_.num_sites(), edge, pairs[q].first, pairs[q].second,
                                          sec.vectors, imaginary);
      // Eigenbasis matrix elements O~ = V^T O V (times i when imaginary);
      // W_mn = R_mn O~_nm.
      RMatrix w = sec.vectors.transpose() * ov;
      w.transposeInPlace();
      w.array() *= r.array();
      const RMatrix wc = w * cosm;
      const RMatrix ws = w * sinm;
      // sum_mn W_mn e_m conj(e_n) with e = cos - i sin.
      const RVector cc = cosm.cwiseProduct(wc).colwise().sum().transpose();
      const RVector ss = sinm.cwiseProduct(ws).colwise().sum().transpose();
      const RVector cs = cosm.cwiseProduct(ws).colwise().sum().transpose();
      const RVector sc = sinm.cwiseProduct(wc).colwise().sum().transpose();
      const auto [a, b] = pairs[q];
      for (Eigen::Index k = 0; k < nt; ++k) {
        const double value = imaginary ? -(cs(k) - sc(k)) : cc(k) + ss(k);
        out[static_cast<std::size_t>(k)](a, b) += value;
      }
      if (!imaginary) {
        double dephased = 0.0;
        for (const auto& [start, len] : groups) dephased += w.block(start, start, len, len).sum();
        out.back()(a, b) += dephased;
      }
    }
  }
  return out;
}

TwoQubitState QuenchEngine::edge_state(const Edge& edge, double t) const {
  const double times[] = {t};
  return TwoQubitState(state_from_expansion(edge_expansions(edge, times).front()), StateSource::evolved);
}

std::vector<QuenchSeriesResult> run_quench(const QuenchProtocol& protocol, std::span<const Edge> edges,
                                           std::span<const Measure> measures, const QuenchOptions& opts) {
  protocol.validate();
  const QuenchEngine engine(protocol);
  const std::vector<double> base_times = protocol.times();
  const std::vector<double> all_times = opts.doubled_window_check ? protocol.doubled_times() : base_times;
  const std::size_t nbase = base_times.size();

  std::vector<QuenchSeriesResult> results;
  for (const Edge& edge : edges) {
    const auto expansions = engine.edge_expansions(edge, all_times);
    std::vector<TwoQubitState> states(expansions.size());
    for (std::size_t k = 0; k < expansions.size(); ++k) {
      states[k] = TwoQubitState(state_from_expansion(expansions[k]), StateSource::evolved);
    }
    const std::string warning = check_structure(states[nbase - 1]);

    for (Measure m : measures) {
      std::vector<double> values(states.size());
      parallel_for(states.size(), opts.workers,
                   [&](std::size_t k) { values[k] = evaluate(m, states[k], opts.optimizer); });
      QuenchSeriesResult r;
      r.edge = edge;
      r.measure = m;
      r.dephased_value = values.back();
      values.pop_back();
      r.series = make_series(base_times, std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(nbase)),
                             std::string(short_name(m)));
      if (opts.doubled_window_check) {
        r.doubled_window = moments(values);
        r.converged = window_converged(Moments{r.series.mean, r.series.std_dev}, r.doubled_window,
                                       protocol.num_samples);
      } else {
        r.doubled_window = Moments{r.series.mean, r.series.std_dev};
      }
      r.structure_warning = warning;
      results.push_back(std::move(r));
    }
  }
  return results;
}

MeasureSeries measure_time_series(const QuenchProtocol& protocol, const Edge& edge, Measure measure) {
  QuenchOptions opts;
  opts.doubled_window_check = false;
  const Edge edges[] = {edge};
  const Measure ms[] = {measure};
  return std::move(run_quench(protocol, edges, ms, opts).front().series);
}

}  // namespace xycorr
