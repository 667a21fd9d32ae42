#pragma once

// Free-fermion results for the infinite transverse XY chain after a field
// quench a -> 0, in dimensionless units (beta_tilde = beta J, a_tilde = a / J,
// k_B = hbar = 1).

#include "xycorr/observables.hpp"

namespace xycorr::analytic {

struct ChainParams {
  double gamma = 0.5;
  double beta_tilde = 20.0;
  double a_tilde = 0.0;
};

/// Lambda(x) = sqrt(gamma^2 sin^2 phi + (x - cos phi)^2).
double dispersion_lambda(double x, double phi, double gamma);

/// Long-time limit of the nearest-neighbor observables of the chain prepared
/// in the canonical state of H(a) and evolved with H(0):
///   T^xx = G(-1), T^yy = G(+1), T^zz = (M^z)^2 - G(1) G(-1), T^xy = 0.
TwoSiteObservables evolved_long_time_observables(const ChainParams& p, double rel_tol = 1e-9);

/// Canonical-state nearest-neighbor observables of H(h = 0).
TwoSiteObservables equilibrium_zero_field_observables(double gamma, double beta_tilde, double rel_tol = 1e-9);

enum class FieldRegion { low, moderate, high };

/// low below 0.4, high above 1.0, moderate in between.
FieldRegion classify_field_region(double a_tilde);
const char* to_string(FieldRegion r);

}  // namespace xycorr::analytic
