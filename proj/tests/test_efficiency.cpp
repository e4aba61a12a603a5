#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "perception/perception.hpp"

using namespace perception;
using doctest::Approx;

TEST_CASE("selling the firm") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  Mechanism lin = sell_the_firm(CostFunction::linear(0.25), u);
  CHECK(lin.rule()[499] == 0.0);
  CHECK(lin.rule()[500] == 1.0);
  Mechanism quad = sell_the_firm(CostFunction::quadratic(), u);
  for (std::size_t j = 0; j < g.n(); j += 97) CHECK(quad.rule()[j] == Approx(g.midpoint(j)));
  Mechanism free = sell_the_firm(CostFunction::linear(0.0), u);
  for (std::size_t j = 0; j < g.n(); ++j) {
    CHECK(free.rule()[j] == 1.0);
    CHECK(free.transfers()[j] == 0.0);
  }
}

TEST_CASE("managing the process") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  SUBCASE("probability weighting: cutoff at one half") {
    ManagedProcess m = manage_the_process(builtin_pgp(ProbWeightSpec{0.5}, u), CostFunction::linear(0.25));
    REQUIRE(m.feasible);
    CHECK(effective_threshold(m.mechanism->rule()).value() == Approx(0.5));
  }
  SUBCASE("hype with a quadratic cost is infeasible") {
    Pgp h = builtin_pgp(HypeSpec{0.3}, u);
    ManagedProcess m = manage_the_process(h, CostFunction::quadratic());
    CHECK_FALSE(m.feasible);
    CHECK(m.bad_second == g.n() - 1);
    CHECK_ERROR_KIND(kappa_i(h, CostFunction::quadratic()), ErrorKind::kInfeasible);
  }
  SUBCASE("perfect perception manages like selling") {
    Pgp p = builtin_pgp(PerfectSpec{}, u);
    ManagedProcess m = manage_the_process(p, CostFunction::quadratic());
    Mechanism s = sell_the_firm(CostFunction::quadratic(), u);
    for (std::size_t j = 0; j < g.n(); ++j) CHECK(m.mechanism->rule()[j] == Approx(s.rule()[j]));
    CHECK(kappa_i(p, CostFunction::quadratic()) == Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("welfare bounds") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  WelfareBounds pw = welfare_bounds(builtin_pgp(ProbWeightSpec{0.5}, u), CostFunction::linear(0.25));
  CHECK(pw.w_a_star == Approx(9.0 / 32).epsilon(1e-9));
  CHECK(pw.w_i_star == Approx(9.0 / 32).epsilon(1e-6));
  CHECK(std::abs(pw.kappa_star) <= 1e-6);
  CHECK(welfare_bounds(builtin_pgp(PerfectSpec{}, u), CostFunction::quadratic()).kappa_star == 0.0);
  // Zero in the continuum; the grid leaves 1/(32 n^2). Frozen from the oracle.
  WelfareBounds c = welfare_bounds(builtin_pgp(ConservatismSpec{0.5}, u), CostFunction::quadratic());
  CHECK(c.w_a_star == Approx(0.16666665625).epsilon(1e-13));
  CHECK(c.kappa_star == Approx(3.12499999766125e-08).epsilon(1e-6));
  CHECK(c.kappa_star > 0.0);
}

TEST_CASE("kappa_I") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  CHECK(kappa_i(builtin_pgp(ProbWeightSpec{0.5}, u), CostFunction::linear(0.25)) == Approx(1.0 / 32).epsilon(1e-9));
  // rho_U with a quadratic cost: q = x on [1/4,3/4], then the cheapest
  // completions 0 below and 3/4 above; 5/192 in the continuum. The grid
  // value sits 1/(32 n) lower (checked at n = 1000, 2000, 4000).
  const double ki = kappa_i(shift_pair_coupling(u), CostFunction::quadratic());
  CHECK(std::abs(ki - (5.0 / 192 - 1.0 / (32 * 2000.0))) <= 1e-7);
}

TEST_CASE("min-attention completion") {
  // One gap [1, 3) between 0.2 and 0.6; the tail sum of w is most negative
  // when the step sits at cell 2.
  std::vector<double> q{0.2, 0, 0, 0.6};
  std::vector<bool> fixed{true, false, false, true};
  std::vector<double> w{0.0, 0.3, -0.5, 0.2};
  auto out = min_attention_completion(q, fixed, w);
  CHECK(out[1] == 0.2);
  CHECK(out[2] == 0.6);
}

TEST_CASE("efficiency example: general monotone rules") {
  Pgp p = builtin_pgp(ProbWeightSpec{0.5}, uniform_prior(Grid(2000)));
  EfficiencyProblem ep(p, CostFunction::linear(0.25));
  CHECK(ep.solve(0.0).regime == EfficiencyRegime::kSellFirmAttentive);
  CHECK(ep.solve(0.0).welfare == Approx(9.0 / 32));
  CHECK(ep.solve(0.04).regime == EfficiencyRegime::kManageProcessInattentive);
  // Mixing "always" with the cutoff at 1/2 gives 1/4 + kappa, which crosses
  // 9/32 - kappa at 1/64.
  CHECK(ep.kappa_bar().value() == Approx(1.0 / 64).epsilon(1e-5));
  const EfficiencyOutcome o = ep.solve(0.025);
  CHECK(o.regime == EfficiencyRegime::kDistortedInattentive);
  CHECK(o.welfare == Approx(0.275).epsilon(1e-5));
  CHECK_FALSE(o.threshold.has_value());
}

TEST_CASE("efficiency example: threshold rules") {
  Pgp p = builtin_pgp(ProbWeightSpec{0.5}, uniform_prior(Grid(2000)));
  EfficiencyProblem ep(p, CostFunction::linear(0.25), AllocationFamily::kThreshold);
  CHECK(ep.kappa_bar().value() == Approx(9.0 / 512).epsilon(1e-6));
  const EfficiencyOutcome lo = ep.solve(0.01);
  CHECK(lo.regime == EfficiencyRegime::kSellFirmAttentive);
  CHECK(lo.threshold.value() == Approx(0.25));
  for (double kappa : {0.02, 0.025, 0.03}) {
    const EfficiencyOutcome o = ep.solve(kappa);
    REQUIRE(o.threshold.has_value());
    const double t = *o.threshold;
    CHECK(std::abs(0.5 * t * t * (1 - t) * (1 - t) - kappa) <= 1e-6);
    // Welfare of the cutoff is 1/4 - p^4/2 + p^2/4.
    CHECK(o.welfare == Approx(0.25 - t * t * t * t / 2 + t * t / 4).epsilon(1e-6));
  }
  CHECK_ERROR_KIND(EfficiencyProblem(p, CostFunction::quadratic(), AllocationFamily::kThreshold), ErrorKind::kSchema);
}

TEST_CASE("unbiased perception: welfare never rises with kappa") {
  Pgp u = shift_pair_coupling(uniform_prior(Grid(2000)));
  EfficiencyProblem ep(u, CostFunction::quadratic());
  CHECK(ep.nu_sell() == Approx(ep.bounds().w_a_star - ep.bounds().w_i_star).epsilon(1e-9));
  double prev = 1.0;
  for (int i = 0; i <= 40; ++i) {
    const double w = ep.solve(0.001 * i).welfare;
    CHECK(w <= prev + 1e-12);
    prev = w;
  }
}

TEST_CASE("infeasible management keeps selling the firm") {
  Pgp h = builtin_pgp(HypeSpec{0.3}, uniform_prior(Grid(500)));
  EfficiencyProblem ep(h, CostFunction::quadratic());
  CHECK_FALSE(ep.manage_feasible());
  CHECK(ep.solve(0.0).regime == EfficiencyRegime::kSellFirmAttentive);
  CHECK(ep.solve(1.0).regime == EfficiencyRegime::kSellFirmInattentive);
  CHECK_FALSE(ep.kappa_bar().has_value());
}

TEST_CASE("effective threshold") {
  Grid g(4);
  CHECK(effective_threshold(AllocationRule(g, {0, 0, 0.5, 1})).value() == Approx(0.625));
  CHECK_FALSE(effective_threshold(AllocationRule(g, {0, 0.5, 0.5, 1})).has_value());
}
