#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "xycorr/ergodicity.hpp"

using namespace xycorr;

namespace {

EquilibriumCurve synthetic_curve(std::vector<double> beta, std::vector<double> values) {
  EquilibriumCurve c;
  c.model = "synthetic";
  c.edge = "bond";
  c.beta_tilde_grid = std::move(beta);
  c.measures = {Measure::discord};
  c.values = {std::move(values)};
  return c;
}

int rank(Verdict v) { return static_cast<int>(v); }

}  // namespace

TEST_SUITE("ergodicity") {

TEST_CASE("scan grid") {
  const ScanRange r = default_scan_range(20.0);
  CHECK(r.relevant_lo == doctest::Approx(2.0));
  CHECK(r.relevant_hi == doctest::Approx(200.0));
  CHECK(r.scan_lo == doctest::Approx(0.01));
  const std::vector<double> g = r.grid();
  CHECK(g.front() == doctest::Approx(0.01));
  CHECK(g.back() == doctest::Approx(200.0));
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::count_if(g.begin(), g.end(), [&](double b) { return r.in_relevant(b); }) == 400);
  CHECK(std::find(g.begin(), g.end(), 2.0) != g.end());
  ScanRange bad = r;
  bad.scan_lo = 5.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(log_grid(1.0, 100.0, 3)[1] == doctest::Approx(10.0));
  CHECK(linear_grid(0.0, 1.0, 5)[2] == doctest::Approx(0.5));
}

TEST_CASE("curve endpoints and consistency") {
  const ModelSpec inf;
  const Measure ms[] = {Measure::concurrence, Measure::log_negativity, Measure::discord, Measure::work_deficit};
  const double grid[] = {0.0, 5.0, 20.0};
  const EquilibriumCurve c = equilibrium_curve(inf, 0.5, grid, ms);
  for (std::size_t m = 0; m < 4; ++m) CHECK(std::abs(c.values[m][0]) < 1e-9);
  CHECK(std::abs(c.values_for(Measure::concurrence)[2] - 0.153) < 0.005);
  const double single[] = {5.0};
  const EquilibriumCurve s = equilibrium_curve(inf, 0.5, single, ms);
  for (std::size_t m = 0; m < 4; ++m) CHECK(s.values[m][0] == c.values[m][1]);

  ModelSpec chain{ModelKind::chain, {6, 0}, 1.0};
  const EquilibriumCurve f = equilibrium_curve(chain, 0.5, grid, ms);
  for (std::size_t m = 0; m < 4; ++m) CHECK(std::abs(f.values[m][0]) < 1e-9);
  const EquilibriumCurve fs = equilibrium_curve(chain, 0.5, single, ms);
  for (std::size_t m = 0; m < 4; ++m) CHECK(fs.values[m][0] == doctest::Approx(f.values[m][1]).epsilon(1e-12));

  const double descending[] = {5.0, 1.0};
  CHECK_THROWS_AS(equilibrium_curve(inf, 0.5, descending, ms), std::invalid_argument);
}

TEST_CASE("verdict classes on a synthetic curve") {
  // Curve rises from 0 to 0.5 on [0.01, 2] and sits on [0.5, 0.6] inside the relevant range [2, 200].
  const EquilibriumCurve c = synthetic_curve({0.01, 1.0, 2.0, 20.0, 200.0}, {0.0, 0.3, 0.5, 0.6, 0.55});
  ScanRange r;
  r.relevant_lo = 2.0;
  r.relevant_hi = 200.0;
  r.scan_lo = 0.01;
  r.scan_hi = 200.0;
  VerdictOptions eps_small;
  eps_small.epsilon = 0.01;

  const ErgodicityVerdict inside = verdict(0.58, 0.0, c, Measure::discord, r, eps_small);
  CHECK(inside.verdict == Verdict::ergodic);
  CHECK(inside.min_gap == 0.0);
  CHECK(r.in_relevant(inside.best_beta_prime));

  const ErgodicityVerdict close = verdict(0.6008, 0.0, c, Measure::discord, r, eps_small);
  CHECK(close.verdict == Verdict::ergodic);
  const ErgodicityVerdict canon = verdict(0.608, 0.0, c, Measure::discord, r, eps_small);
  CHECK(canon.verdict == Verdict::canonically_ergodic);

  const ErgodicityVerdict outside = verdict(0.2, 0.0, c, Measure::discord, r, eps_small);
  CHECK(outside.verdict == Verdict::nonergodic);
  CHECK(outside.best_beta_prime < 2.0);

  const ErgodicityVerdict none = verdict(0.9, 0.0, c, Measure::discord, r, eps_small);
  CHECK(none.verdict == Verdict::strongly_nonergodic);
  CHECK(none.min_gap == doctest::Approx(0.3));

  VerdictOptions auto_eps;
  CHECK(verdict(0.9, 0.5, c, Measure::discord, r, auto_eps).epsilon == 0.5);
  CHECK(verdict(0.9, 0.0, c, Measure::discord, r, auto_eps).epsilon == 1e-4);
  CHECK_THROWS_AS(verdict(0.1, 0.0, EquilibriumCurve{}, Measure::discord, r), std::invalid_argument);
}

TEST_CASE("verdicts are monotone in epsilon and deterministic") {
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> beta, vals;
    for (int k = 0; k < 12; ++k) {
      beta.push_back(0.01 * std::pow(10.0, k * 0.4));
      vals.push_back(xytest::uniform(0.0, 0.1));
    }
    const EquilibriumCurve c = synthetic_curve(beta, vals);
    ScanRange r;
    r.relevant_lo = beta[4];
    r.relevant_hi = beta[11];
    r.scan_lo = beta[0];
    r.scan_hi = beta[11];
    const double p = xytest::uniform(-0.02, 0.12);
    int previous = -1;
    for (double eps : {1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3}) {
      VerdictOptions o;
      o.epsilon = eps;
      const ErgodicityVerdict v = verdict(p, 0.0, c, Measure::discord, r, o);
      CHECK(rank(v.verdict) >= previous);
      previous = rank(v.verdict);
      const ErgodicityVerdict again = verdict(p, 0.0, c, Measure::discord, r, o);
      CHECK(again.verdict == v.verdict);
      CHECK(again.min_gap == v.min_gap);
    }
  }
}

TEST_CASE("vanishing quench is ergodic for every measure") {
  const double a[] = {1e-3};
  const Measure ms[] = {Measure::concurrence, Measure::log_negativity, Measure::discord, Measure::work_deficit};
  RegionOptions o;
  o.range = default_scan_range(20.0);
  const auto rows = region_report(ModelSpec{}, 0.5, 20.0, a, ms, o);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) CHECK(r.verdict.verdict == Verdict::ergodic);
}

TEST_CASE("region report covers every edge, field and measure") {
  ModelSpec ladder{ModelKind::ladder, {3, 0}, 1.0};
  RegionOptions o;
  o.range = default_scan_range(5.0);
  o.range.points = 40;
  o.num_samples = 40;
  const double a[] = {0.1, 0.6};
  const Measure ms[] = {Measure::concurrence, Measure::discord};
  const auto rows = region_report(ladder, 0.5, 5.0, a, ms, o);
  CHECK(rows.size() == 2 * 2 * 2);
  CHECK(rows.front().edge == "leg");
  CHECK(rows.back().edge == "rung");
  CHECK(rows.front().model == "ladder-2x3");
}

TEST_CASE("model names") {
  CHECK(parse_model_kind("chain-infinite") == ModelKind::chain_infinite);
  CHECK(parse_model_kind("torus") == ModelKind::torus);
  CHECK_THROWS_AS(parse_model_kind("cube"), std::invalid_argument);
  CHECK(ModelSpec{ModelKind::torus, {4, 3}, 1.0}.describe() == "torus-4x3");
  CHECK(representative_edges(build_torus(4, 3)).size() == 2);
  CHECK(edge_label(build_torus(4, 3), representative_edges(build_torus(4, 3))[1]) == "y");
}

}
