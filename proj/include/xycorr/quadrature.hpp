#pragma once

#include <functional>
#include <vector>

namespace xycorr {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  int max_depth = 40;
  int order = 20;
};

/// Adaptive Gauss-Legendre integration by panel bisection. A panel is
/// accepted when the single-panel and split-panel results agree within
/// rel_tol times the running estimate of the integral of |f|. Throws
/// NumericalError if a panel still disagrees at max_depth.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

double integrate_0_pi(const std::function<double(double)>& f, double rel_tol = 1e-9);

}  // namespace xycorr
