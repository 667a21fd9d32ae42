#include "xycorr/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "xycorr/linalg.hpp"

namespace xycorr {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

namespace {

const GaussLegendreRule& cached_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

struct Panel {
  double value;
  double abs_value;
};

Panel apply_rule(const std::function<double(double)>& f, const GaussLegendreRule& rule, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Panel p{0.0, 0.0};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v = f(mid + half * rule.nodes[k]);
    if (!std::isfinite(v)) throw NumericalError("integrate: integrand is not finite");
    p.value += rule.weights[k] * v;
    p.abs_value += rule.weights[k] * std::abs(v);
  }
  p.value *= half;
  p.abs_value *= half;
  return p;
}

struct Adaptive {
  const std::function<double(double)>& f;
  const GaussLegendreRule& rule;
  double tol_scale;
  int max_depth;
  QuadratureResult result;

  void run(double lo, double hi, const Panel& whole, int depth) {
    const double mid = 0.5 * (lo + hi);
    const Panel left = apply_rule(f, rule, lo, mid);
    const Panel right = apply_rule(f, rule, mid, hi);
    const double split = left.value + right.value;
    const double err = std::abs(split - whole.value);
    // Panel tolerance shrinks with width so the total stays under tol_scale.
    if (err <= tol_scale * std::ldexp(1.0, -depth) || err <= 1e-300) {
      result.value += split;
      result.error_estimate += err;
      ++result.panels;
      return;
    }
    if (depth >= max_depth) {
      std::ostringstream os;
      os << "integrate: no convergence on [" << lo << ", " << hi << "] after " << depth << " bisections";
      throw NumericalError(os.str());
    }
    run(lo, mid, left, depth + 1);
    run(mid, hi, right, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts) {
  if (!(hi > lo)) throw std::invalid_argument("integrate: require hi > lo");
  if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("integrate: rel_tol must be positive");
  const auto& rule = cached_rule(opts.order);
  const Panel whole = apply_rule(f, rule, lo, hi);
  // Scale by the integral of |f| so that integrals that cancel to zero still
  // converge in relative terms.
  const double scale = std::max(whole.abs_value, 1e-300);
  Adaptive a{f, rule, opts.rel_tol * scale, opts.max_depth, {}};
  a.run(lo, hi, whole, 0);
  return a.result;
}

double integrate_0_pi(const std::function<double(double)>& f, double rel_tol) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  return integrate(f, 0.0, std::numbers::pi, opts).value;
}

}  // namespace xycorr
