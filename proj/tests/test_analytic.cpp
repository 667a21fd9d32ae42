#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xycorr/analytic_chain.hpp"
#include "xycorr/measures.hpp"
#include "xycorr/reduced_states.hpp"

using namespace xycorr;
using namespace xycorr::analytic;

TEST_SUITE("analytic") {

TEST_CASE("dispersion") {
  CHECK(dispersion_lambda(0.0, 0.0, 0.3) == doctest::Approx(1.0));
  for (double phi : {0.1, 0.7, 2.0, 3.0}) CHECK(dispersion_lambda(0.0, phi, 1.0) == doctest::Approx(1.0));
  CHECK(dispersion_lambda(0.6, M_PI / 2, 0.5) == doctest::Approx(std::sqrt(0.61)));
}

TEST_CASE("field regions") {
  CHECK(classify_field_region(0.2) == FieldRegion::low);
  CHECK(classify_field_region(0.6) == FieldRegion::moderate);
  CHECK(classify_field_region(2.0) == FieldRegion::high);
  CHECK_THROWS_AS(classify_field_region(-0.1), std::invalid_argument);
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(evolved_long_time_observables(ChainParams{0.0, 20.0, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(evolved_long_time_observables(ChainParams{0.5, -1.0, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(equilibrium_zero_field_observables(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("no quench reproduces the equilibrium state") {
  for (double gamma : {0.3, 0.5, 1.0}) {
    for (double beta : {0.5, 5.0, 20.0}) {
      const TwoSiteObservables a = evolved_long_time_observables(ChainParams{gamma, beta, 0.0});
      const TwoSiteObservables b = equilibrium_zero_field_observables(gamma, beta);
      CHECK(std::abs(a.mz - b.mz) < 1e-9);
      CHECK(std::abs(a.txx - b.txx) < 1e-9);
      CHECK(std::abs(a.tyy - b.tyy) < 1e-9);
      CHECK(std::abs(a.tzz - b.tzz) < 1e-9);
    }
  }
}

TEST_CASE("infinite temperature") {
  const TwoSiteObservables o = equilibrium_zero_field_observables(0.5, 0.0);
  CHECK(o.mz == 0.0);
  CHECK(std::abs(o.txx) + std::abs(o.tyy) + std::abs(o.tzz) < 1e-15);
  const TwoQubitState rho = state_from_observables(o, StateSource::equilibrium);
  CHECK((rho.matrix() - Eigen::Matrix4cd::Identity() / 4.0).norm() < 1e-15);
}

TEST_CASE("low-temperature equilibrium concurrence") {
  const TwoQubitState rho = state_from_observables(equilibrium_zero_field_observables(0.5, 20.0), StateSource::equilibrium);
  CHECK(std::abs(concurrence(rho) - 0.153) < 0.005);
}

TEST_CASE("high-field limit") {
  const TwoSiteObservables o = evolved_long_time_observables(ChainParams{0.5, 20.0, 100.0});
  CHECK(std::abs(o.mz - 2.0 / 3.0) < 1e-3);

  // Leading 1/a tail of G(+-1): (1/pi) int g^2 s^2 / L0^2 (g s sin(r phi) - c cos(r phi)).
  auto tail = [](int r) {
    const double g = 0.5;
    const int n = 1000000;
    double sum = 0;
    for (int k = 0; k < n; ++k) {
      const double phi = (k + 0.5) * std::numbers::pi / n;
      const double s = std::sin(phi), c = std::cos(phi);
      sum += g * g * s * s / (g * g * s * s + c * c) * (g * s * std::sin(r * phi) - c * std::cos(r * phi));
    }
    return sum / n;
  };
  const double tail_minus = tail(-1), tail_plus = tail(1);
  for (double a : {100.0, 1000.0, 10000.0}) {
    CAPTURE(a);
    const TwoSiteObservables h = evolved_long_time_observables(ChainParams{0.5, 20.0, a});
    CHECK(std::abs(a * h.txx - tail_minus) < 1e-4);
    CHECK(std::abs(a * h.tyy - tail_plus) < 1e-4);
  }

  const TwoSiteObservables far = evolved_long_time_observables(ChainParams{0.5, 20.0, 1000.0});
  CHECK(std::abs(far.txx) < 1e-3);
  CHECK(std::abs(far.tyy) < 1e-3);
  const TwoQubitState rho = state_from_observables(far);
  Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero();
  a(0, 0) = (1 + far.mz) / 2;
  a(1, 1) = (1 - far.mz) / 2;
  Eigen::Matrix4cd prod = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) prod.block<2, 2>(2 * i, 2 * j) = a(i, j) * a;
  CHECK((rho.matrix() - prod).norm() < 1e-3);
}

TEST_CASE("reconstructed states are valid on a parameter grid") {
  int checked = 0;
  for (int i = 0; i < 10; ++i) {
    const double gamma = 0.1 + 0.1 * i;
    for (int j = 0; j < 10; ++j) {
      const double beta = 20.0 * j / 9.0;
      for (int k = 0; k < 10; ++k) {
        const double a = 3.0 * k / 9.0;
        const TwoSiteObservables o = evolved_long_time_observables(ChainParams{gamma, beta, a});
        // Throws NumericalError if an eigenvalue falls below -1e-9.
        CHECK_NOTHROW(state_from_observables(o));
        ++checked;
      }
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("magnetization is continuous in the initial field") {
  for (double a : {0.0, 0.5, 0.999, 1.0, 1.5, 3.0}) {
    const double m0 = evolved_long_time_observables(ChainParams{0.5, 20.0, a}).mz;
    const double m1 = evolved_long_time_observables(ChainParams{0.5, 20.0, a + 1e-4}).mz;
    CHECK(std::abs(m1 - m0) < 1e-2);
  }
}

TEST_CASE("tolerance refinement is stable") {
  const TwoSiteObservables a = evolved_long_time_observables(ChainParams{0.5, 20.0, 0.6}, 1e-9);
  const TwoSiteObservables b = evolved_long_time_observables(ChainParams{0.5, 20.0, 0.6}, 5e-10);
  CHECK(std::abs(a.mz - b.mz) < 1e-8);
  CHECK(std::abs(a.txx - b.txx) < 1e-8);
  CHECK(std::abs(a.tyy - b.tyy) < 1e-8);
}

}
