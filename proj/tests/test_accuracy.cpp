#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "perception/perception.hpp"

using namespace perception;
using doctest::Approx;

TEST_CASE("S for perfect perception is (1 - x^2)/2") {
  Grid g(2000);
  SCurve s(builtin_pgp(PerfectSpec{}, uniform_prior(g)));
  for (std::size_t k = 0; k <= g.n(); k += 100) {
    const double x = g.boundary(k);
    CHECK(s.at(k) == Approx((1 - x * x) / 2).epsilon(1e-12));
  }
}

TEST_CASE("S for hype") {
  // S(x; h) = int_x^1 F + h int_0^x F with F uniform.
  Grid g(2000);
  for (double h : {0.25, 0.75}) {
    SCurve s(builtin_pgp(HypeSpec{h}, uniform_prior(g)));
    double worst = 0.0;
    for (std::size_t k = 0; k < g.n(); ++k) {
      const double x = g.boundary(k);
      worst = std::max(worst, std::abs(s.at(k) - ((1 - x * x) / 2 + h * x * x / 2)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("S for probability weighting") {
  // 1 - x F(x^{1/a}) - int_{x^{1/a}}^1 t dt with F uniform.
  Grid g(2000);
  for (double a : {0.5, 2.0}) {
    SCurve s(builtin_pgp(ProbWeightSpec{a}, uniform_prior(g)));
    double worst = 0.0;
    for (std::size_t k = 0; k <= g.n(); ++k) {
      const double x = g.boundary(k), r = std::pow(x, 1.0 / a);
      worst = std::max(worst, std::abs(s.at(k) - (1 - x * r - (1 - r * r) / 2)));
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("accuracy order") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  CHECK(is_more_accurate(screening_pgp(ScreeningPgp::kRhoC, 2000), screening_pgp(ScreeningPgp::kRhoU, 2000)) ==
        AccuracyOrder::kAMore);
  CHECK(is_more_accurate(builtin_pgp(HypeSpec{0.75}, u), builtin_pgp(HypeSpec{0.25}, u)) == AccuracyOrder::kBMore);
  CHECK(is_more_accurate(builtin_pgp(ProbWeightSpec{2}, u), builtin_pgp(ProbWeightSpec{3}, u)) == AccuracyOrder::kAMore);
  CHECK(is_more_accurate(builtin_pgp(PerfectSpec{}, u), builtin_pgp(PerfectSpec{}, u)) == AccuracyOrder::kEqual);
}

TEST_CASE("crossing garblings are incomparable") {
  // A: pool the middle block [0.2, 0.8); B: pool the low block [0, 0.6).
  // Neither integrated CDF dominates.
  Grid g(1000);
  TypeDist u = uniform_prior(g);
  Pgp a = partition_garbling(u, {0.2, 0.8});
  Pgp b = partition_garbling(u, {0.6});
  CHECK(is_more_accurate(a, b) == AccuracyOrder::kIncomparable);
}

TEST_CASE("different priors cannot be compared") {
  Grid g(100);
  CHECK_ERROR_KIND(is_more_accurate(builtin_pgp(PerfectSpec{}, uniform_prior(g)),
                                    builtin_pgp(PerfectSpec{}, power_prior(g, 2.0))),
                   ErrorKind::kInvalidComparison);
}

TEST_CASE("agent welfare") {
  Grid g(2000);
  Mechanism qi = transfers_from_envelope(
      AllocationRule::from_function(g, [](double x) { return std::min(0.75, 2 * x - 0.75); }));
  Pgp u = screening_pgp(ScreeningPgp::kRhoU, 2000), c = screening_pgp(ScreeningPgp::kRhoC, 2000);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(agent_welfare(qi, inf, u) == Approx(9.0 / 256).epsilon(1e-5));
  CHECK(agent_welfare(qi, inf, c) == Approx(9.0 / 128).epsilon(1e-5));
  CHECK(agent_welfare(qi, 0.0, u) == Approx(attentive_utility(qi, u.prior())));
}
