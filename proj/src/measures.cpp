#include "xycorr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace xycorr {

namespace {

constexpr double kPi = std::numbers::pi;

double xlog2x(double p) { return p > 1e-15 ? -p * std::log2(p) : 0.0; }

// Eigenvalues of a 2x2 Hermitian matrix [[a, c], [conj(c), b]].
std::pair<double, double> eig2(double a, double b, Complex c) {
  const double mean = 0.5 * (a + b);
  const double half_gap = std::sqrt(0.25 * (a - b) * (a - b) + std::norm(c));
  return {mean - half_gap, mean + half_gap};
}

double entropy4(const Eigen::Matrix4cd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(es.eigenvalues());
}

Eigen::Matrix2cd trace_out_second(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd r;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) r(a, c) = rho(2 * a, 2 * c) + rho(2 * a + 1, 2 * c + 1);
  return r;
}

Eigen::Matrix2cd trace_out_first(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd r;
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d) r(b, d) = rho(b, d) + rho(2 + b, 2 + d);
  return r;
}

double entropy2(const Eigen::Matrix2cd& m) {
  const auto [lo, hi] = eig2(m(0, 0).real(), m(1, 1).real(), m(0, 1));
  return xlog2x(std::max(lo, 0.0)) + xlog2x(std::max(hi, 0.0));
}

// Unnormalized conditional blocks M_i = <v_i|_B rho |v_i>_B (2x2 on A) for
// the measurement basis; returns the four eigenvalues (two per outcome).
struct Outcome {
  double p;
  double lo;
  double hi;
};

std::array<Outcome, 2> measure_second(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis) {
  const double c = std::cos(0.5 * basis.theta);
  const double s = std::sin(0.5 * basis.theta);
  const Complex e = std::polar(1.0, basis.phi);
  const std::array<std::array<Complex, 2>, 2> v = {{{c, e * s}, {-std::conj(e) * s, c}}};
  std::array<Outcome, 2> out{};
  for (int i = 0; i < 2; ++i) {
    Complex m[2][2];
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap) {
        Complex acc = 0;
        for (int b = 0; b < 2; ++b)
          for (int bp = 0; bp < 2; ++bp) acc += std::conj(v[i][b]) * rho(2 * a + b, 2 * ap + bp) * v[i][bp];
        m[a][ap] = acc;
      }
    const auto [lo, hi] = eig2(m[0][0].real(), m[1][1].real(), m[0][1]);
    out[i] = Outcome{m[0][0].real() + m[1][1].real(), std::max(lo, 0.0), std::max(hi, 0.0)};
  }
  return out;
}

double conditional_entropy_impl(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis) {
  double s = 0.0;
  for (const auto& o : measure_second(rho, basis)) {
    if (o.p < 1e-12) continue;
    s += o.p * (xlog2x(o.lo / o.p) + xlog2x(o.hi / o.p));
  }
  return s;
}

double dephased_entropy_impl(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis) {
  double s = 0.0;
  for (const auto& o : measure_second(rho, basis)) s += xlog2x(o.lo) + xlog2x(o.hi);
  return s;
}

// Golden-section minimization of g on [lo, hi].
template <class G>
std::pair<double, double> golden(G&& g, double lo, double hi, double tol, int& evals) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  evals += 2;
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
    }
    ++evals;
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Grid search then coordinate-wise golden-section refinement.
template <class F>
std::pair<double, OptimizerInfo> minimize_over_bases(F&& f, const OptimizerOptions& opts) {
  if (opts.grid_theta < 2 || opts.grid_phi < 1) throw std::invalid_argument("optimizer grid too small");
  OptimizerInfo info;
  info.grid_theta = opts.grid_theta;
  info.grid_phi = opts.grid_phi;
  const double dtheta = kPi / (opts.grid_theta - 1);
  const double dphi = 2.0 * kPi / opts.grid_phi;

  double best = std::numeric_limits<double>::infinity();
  MeasurementBasis arg;
  for (int i = 0; i < opts.grid_theta; ++i) {
    const double theta = i * dtheta;
    // phi is irrelevant at the poles.
    const int nphi = (i == 0 || i == opts.grid_theta - 1) ? 1 : opts.grid_phi;
    for (int j = 0; j < nphi; ++j) {
      const MeasurementBasis b{theta, j * dphi};
      const double v = f(b);
      if (v < best) {
        best = v;
        arg = b;
      }
    }
  }
  info.grid_value = best;

  int evals = 0;
  info.converged = false;
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    ++info.refinement_iterations;
    const MeasurementBasis start = arg;
    const double lo = std::max(0.0, arg.theta - dtheta);
    const double hi = std::min(kPi, arg.theta + dtheta);
    auto [t, ft] = golden([&](double th) { return f(MeasurementBasis{th, arg.phi}); }, lo, hi, opts.angle_tol, evals);
    if (ft < best) {
      best = ft;
      arg.theta = t;
    }
    auto [p, fp] = golden([&](double ph) { return f(MeasurementBasis{arg.theta, ph}); }, arg.phi - dphi,
                          arg.phi + dphi, opts.angle_tol, evals);
    if (fp < best) {
      best = fp;
      arg.phi = p;
    }
    if (std::abs(arg.theta - start.theta) < opts.angle_tol && std::abs(arg.phi - start.phi) < opts.angle_tol) {
      info.converged = true;
      break;
    }
  }
  arg.phi = std::fmod(arg.phi, 2.0 * kPi);
  if (arg.phi < 0.0) arg.phi += 2.0 * kPi;
  info.best = arg;
  return {best, info};
}

double clamp_nonnegative(double v, const char* what) {
  if (v < -1e-9) {
    std::ostringstream os;
    os << what << " evaluated to " << v;
    throw NumericalError(os.str());
  }
  return std::max(v, 0.0);
}

}  // namespace

std::array<Eigen::Matrix2cd, 2> MeasurementBasis::projectors() const {
  Eigen::Vector2cd v(std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi));
  Eigen::Matrix2cd b1 = v * v.adjoint();
  return {b1, Eigen::Matrix2cd::Identity() - b1};
}

double concurrence(const TwoQubitState& state) {
  const Eigen::Matrix4cd& rho = state.matrix();
  const Eigen::Matrix4cd yy = pauli_pair(2, 2);
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  // sqrt of the spectrum of rho*tilde equals the spectrum of
  // sqrt(sqrt(rho) tilde sqrt(rho)), which is Hermitian.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd sq = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  Eigen::Matrix4cd r = sq * tilde * sq;
  r = 0.5 * (r + r.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> er(r, Eigen::EigenvaluesOnly);
  Eigen::Vector4d lam = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // ascending -> lam(3) is the largest
  const double c = lam(3) - lam(2) - lam(1) - lam(0);
  return std::clamp(c, 0.0, 1.0);
}

double negativity(const TwoQubitState& state) {
  const HermitianOperator pt = partial_transpose(HermitianOperator(CMatrix(state.matrix())), Subsystem::first);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pt.matrix(), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()(k) < 0.0) neg -= es.eigenvalues()(k);
  }
  return neg;
}

double log_negativity(const TwoQubitState& state) { return std::log2(2.0 * negativity(state) + 1.0); }

double mutual_information(const TwoQubitState& state) {
  const Eigen::Matrix4cd& rho = state.matrix();
  const double i = entropy2(trace_out_second(rho)) + entropy2(trace_out_first(rho)) - entropy4(rho);
  return clamp_nonnegative(i, "mutual information");
}

double conditional_entropy(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis) {
  return conditional_entropy_impl(rho, basis);
}

double dephased_entropy(const Eigen::Matrix4cd& rho, const MeasurementBasis& basis) {
  return dephased_entropy_impl(rho, basis);
}

MeasureResult min_conditional_entropy(const TwoQubitState& state, Party measured, const OptimizerOptions& opts) {
  const Eigen::Matrix4cd rho = measured == Party::second ? state.matrix() : swap_qubits(state.matrix());
  auto [v, info] = minimize_over_bases([&](const MeasurementBasis& b) { return conditional_entropy_impl(rho, b); },
                                       opts);
  return MeasureResult{v, info};
}

MeasureResult classical_correlation(const TwoQubitState& state, Party measured, const OptimizerOptions& opts) {
  MeasureResult r = min_conditional_entropy(state, measured, opts);
  const Eigen::Matrix2cd unmeasured =
      measured == Party::second ? trace_out_second(state.matrix()) : trace_out_first(state.matrix());
  r.value = clamp_nonnegative(entropy2(unmeasured) - r.value, "classical correlation");
  return r;
}

MeasureResult discord(const TwoQubitState& state, Party measured, const OptimizerOptions& opts) {
  MeasureResult r = classical_correlation(state, measured, opts);
  r.value = clamp_nonnegative(mutual_information(state) - r.value, "discord");
  return r;
}

MeasureResult work_deficit(const TwoQubitState& state, const OptimizerOptions& opts) {
  const Eigen::Matrix4cd& rho = state.matrix();
  auto [v, info] = minimize_over_bases([&](const MeasurementBasis& b) { return dephased_entropy_impl(rho, b); }, opts);
  return MeasureResult{clamp_nonnegative(v - entropy4(rho), "work-deficit"), info};
}

std::string_view short_name(Measure m) {
  switch (m) {
    case Measure::concurrence: return "C";
    case Measure::log_negativity: return "EN";
    case Measure::discord: return "Q";
    case Measure::work_deficit: return "WD";
    case Measure::mutual_information: return "I";
    case Measure::classical_correlation: return "J";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  for (Measure m : {Measure::concurrence, Measure::log_negativity, Measure::discord, Measure::work_deficit,
                    Measure::mutual_information, Measure::classical_correlation}) {
    if (name == short_name(m)) return m;
  }
  throw std::invalid_argument("unknown measure '" + std::string(name) + "' (expected C, EN, Q, WD, I or J)");
}

std::vector<Measure> parse_measure_list(std::string_view csv) {
  std::vector<Measure> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string_view tok = csv.substr(pos, comma == std::string_view::npos ? csv.npos : comma - pos);
    if (!tok.empty()) out.push_back(parse_measure(tok));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty measure list");
  return out;
}

MeasureResult evaluate_detailed(Measure m, const TwoQubitState& rho, const OptimizerOptions& opts) {
  switch (m) {
    case Measure::concurrence: return MeasureResult{concurrence(rho), std::nullopt};
    case Measure::log_negativity: return MeasureResult{log_negativity(rho), std::nullopt};
    case Measure::discord: return discord(rho, Party::second, opts);
    case Measure::work_deficit: return work_deficit(rho, opts);
    case Measure::mutual_information: return MeasureResult{mutual_information(rho), std::nullopt};
    case Measure::classical_correlation: return classical_correlation(rho, Party::second, opts);
  }
  throw std::invalid_argument("unknown measure");
}

double evaluate(Measure m, const TwoQubitState& rho, const OptimizerOptions& opts) {
  return evaluate_detailed(m, rho, opts).value;
}

}  // namespace xycorr
