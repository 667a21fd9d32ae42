#include <doctest.h>

#include "support.hpp"
#include "xycorr/analytic_chain.hpp"
#include "xycorr/measures.hpp"

using namespace xycorr;
using Eigen::Matrix4cd;

namespace {

TwoQubitState st(const Matrix4cd& m) { return TwoQubitState(m, StateSource::generic); }
TwoQubitState random_two_qubit() { return st(Matrix4cd(xytest::random_state(4))); }

Matrix4cd product(double ax, double ay, double az, double bx, double by, double bz) {
  return xytest::kron4(xytest::qubit_state(ax, ay, az), xytest::qubit_state(bx, by, bz));
}

Matrix4cd local_rotation(const Matrix4cd& rho) {
  const Eigen::Matrix2cd ua = xytest::random_unitary(2);
  const Eigen::Matrix2cd ub = xytest::random_unitary(2);
  const Matrix4cd u = xytest::kron4(ua, ub);
  return u * rho * u.adjoint();
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("concurrence") {
  CHECK(concurrence(st(xytest::singlet())) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(concurrence(st(product(0.3, 0.1, 0.2, -0.5, 0.2, 0.1))) < 1e-7);
  CHECK(concurrence(st(xytest::werner(0.8))) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(concurrence(st(xytest::werner(0.3))) == 0.0);
}

TEST_CASE("log negativity") {
  CHECK(log_negativity(st(xytest::singlet())) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_negativity(st(Matrix4cd(Matrix4cd::Identity() / 4.0))) == 0.0);
  CHECK(negativity(st(xytest::werner(0.8))) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(log_negativity(st(xytest::werner(0.8))) == doctest::Approx(std::log2(1.7)).epsilon(1e-12));
  CHECK(std::log2(1.7) == doctest::Approx(0.76553).epsilon(1e-5));
}

TEST_CASE("mutual information") {
  CHECK(std::abs(mutual_information(st(product(0.3, 0.1, 0.2, -0.5, 0.2, 0.1)))) < 1e-12);
  CHECK(mutual_information(st(xytest::singlet())) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mutual_information(st(xytest::classical_correlated())) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditional entropy and classical correlation") {
  const Eigen::Matrix2cd a = xytest::qubit_state(0.3, 0.1, 0.2);
  const Matrix4cd prod = xytest::kron4(a, xytest::qubit_state(-0.5, 0.2, 0.1));
  const double sa = xytest::entropy_bits(a);
  CHECK(min_conditional_entropy(st(prod)).value == doctest::Approx(sa).epsilon(1e-9));
  CHECK(conditional_entropy(prod, MeasurementBasis{1.1, 2.3}) == doctest::Approx(sa).epsilon(1e-12));
  CHECK(std::abs(min_conditional_entropy(st(xytest::singlet())).value) < 1e-9);
  CHECK(std::abs(classical_correlation(st(prod)).value) < 1e-9);
  CHECK(classical_correlation(st(xytest::classical_correlated())).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(classical_correlation(st(xytest::singlet())).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("discord and work deficit anchors") {
  CHECK(discord(st(xytest::singlet())).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(discord(st(xytest::classical_correlated())).value) < 1e-9);
  CHECK(work_deficit(st(xytest::singlet())).value == doctest::Approx(1.0).epsilon(1e-9));
  Eigen::Vector2cd u(0.6, Complex(0.0, 0.8));
  Eigen::Vector2cd v(1.0, 0.0);
  const Matrix4cd pure_prod = xytest::kron4(u * u.adjoint(), v * v.adjoint());
  CHECK(std::abs(work_deficit(st(pure_prod)).value) < 1e-9);
}

TEST_CASE("ordering of correlation quantities on random states") {
  for (int trial = 0; trial < 30; ++trial) {
    const TwoQubitState rho = random_two_qubit();
    const double i = mutual_information(rho);
    const double j = classical_correlation(rho).value;
    CHECK(j >= -1e-9);
    CHECK(j <= i + 1e-9);
    CHECK(discord(rho).value >= -1e-9);
    CHECK(work_deficit(rho).value >= -1e-9);
  }
}

TEST_CASE("local unitary invariance") {
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix4cd rho = Matrix4cd(xytest::random_state(4));
    const Matrix4cd rot = local_rotation(rho);
    for (Measure m : {Measure::concurrence, Measure::log_negativity, Measure::discord, Measure::work_deficit,
                      Measure::mutual_information, Measure::classical_correlation}) {
      CHECK(std::abs(evaluate(m, st(rho)) - evaluate(m, st(rot))) < 1e-6);
    }
  }
}

TEST_CASE("measured party is immaterial on model states") {
  for (double a : {0.2, 0.6, 2.0}) {
    const TwoQubitState rho = state_from_observables(analytic::evolved_long_time_observables({0.5, 20.0, a}));
    CHECK(std::abs(discord(rho, Party::first).value - discord(rho, Party::second).value) < 1e-6);
  }
  const TwoQubitState eq = state_from_observables(analytic::equilibrium_zero_field_observables(0.5, 3.0));
  CHECK(std::abs(discord(eq, Party::first).value - discord(eq, Party::second).value) < 1e-6);
}

TEST_CASE("refinement never worsens the grid optimum") {
  for (int trial = 0; trial < 20; ++trial) {
    const TwoQubitState rho = trial % 2 ? random_two_qubit() : st(xytest::random_x_state());
    const MeasureResult r = min_conditional_entropy(rho);
    REQUIRE(r.optimizer.has_value());
    CHECK(r.value <= r.optimizer->grid_value + 1e-15);
    CHECK(r.optimizer->grid_theta == 90);
    CHECK(r.optimizer->grid_phi == 180);
    CHECK(r.optimizer->converged);
  }
}

TEST_CASE("discord against a 0.5 degree exhaustive grid on general states") {
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix4cd rho = Matrix4cd(xytest::random_state(4));
    CHECK(std::abs(discord(st(rho)).value - xytest::oracle_discord(rho, 0.5)) < 1e-4);
  }
}

TEST_CASE("work deficit against an exhaustive grid") {
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix4cd rho = xytest::random_x_state();
    const double oracle =
        xytest::exhaustive_min([&](double t, double p) { return xytest::oracle_dephased_entropy(rho, t, p); }, 1.0) -
        xytest::entropy_bits(rho);
    const double wd = work_deficit(st(rho)).value;
    CHECK(wd <= oracle + 1e-9);
    CHECK(std::abs(wd - oracle) < 1e-3);
  }
}

TEST_CASE("measure names") {
  CHECK(parse_measure("Q") == Measure::discord);
  CHECK(parse_measure("EN") == Measure::log_negativity);
  CHECK(short_name(Measure::work_deficit) == "WD");
  const auto list = parse_measure_list("C,EN,Q,WD");
  CHECK(list.size() == 4);
  CHECK_THROWS_AS(parse_measure("XX"), std::invalid_argument);
}

}
