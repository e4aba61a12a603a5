#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "perception/perception.hpp"

using namespace perception;
using doctest::Approx;

namespace {

// Largest |w_j n - density(m_j)| over cells whose midpoint avoids the kinks.
double density_gap(const Pgp& p, double (*density)(double), std::initializer_list<double> kinks) {
  AttentionWeights w(p);
  const Grid& g = p.grid();
  double worst = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double m = g.midpoint(j);
    bool near_kink = false;
    for (double k : kinks) near_kink = near_kink || std::abs(m - k) < 2.0 / g.n();
    if (!near_kink) worst = std::max(worst, std::abs(w.w()[j] * g.n() - density(m)));
  }
  return worst;
}

}  // namespace

TEST_CASE("attention weight densities") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  CHECK(density_gap(builtin_pgp(ConservatismSpec{0.5}, u),
                    [](double x) { return x < 0.25 ? -x : x < 0.75 ? 0.5 - x : 1 - x; }, {0.25, 0.75}) <= 1e-6);
  CHECK(density_gap(shift_pair_coupling(u), [](double x) { return x < 0.25 ? -x : x < 0.75 ? x - 0.5 : 1 - x; },
                    {0.25, 0.75}) <= 1e-6);
  CHECK(density_gap(builtin_pgp(ProbWeightSpec{0.5}, u), [](double x) { return 3 * x * x - 2 * x * x * x - x; }, {}) <=
        1e-4);
}

TEST_CASE("weights split into information and bias parts") {
  Pgp p = builtin_pgp(PrelecSpec{}, power_prior(Grid(300), 1.4));
  AttentionWeights w(p);
  for (std::size_t j = 0; j < 300; ++j) CHECK(w.w()[j] == Approx(w.information()[j] + w.bias()[j]));
  // A constant rule earns nothing.
  double total = 0.0;
  for (double x : w.w()) total += x;
  CHECK(std::abs(total) <= 1e-14);
}

TEST_CASE("value of attention of a constant rule is zero") {
  Grid g(500);
  Pgp p = builtin_pgp(HypeSpec{0.3}, uniform_prior(g));
  CHECK(std::abs(value_of_attention(AllocationRule::constant(g, 0.7), p)) <= 1e-14);
  CHECK(std::abs(value_of_attention_direct(AllocationRule::constant(g, 0.7), p)) <= 1e-14);
}

TEST_CASE("screening constants for the value of attention") {
  Grid g(2000);
  auto qa = AllocationRule::from_function(g, [](double x) { return 2 * x - 1; });
  auto qi = AllocationRule::from_function(g, [](double x) { return std::min(0.75, 2 * x - 0.75); });
  Pgp u = shift_pair_coupling(uniform_prior(g));
  Pgp c = builtin_pgp(ConservatismSpec{0.5}, uniform_prior(g));
  CHECK(value_of_attention(qa, u) == Approx(1.0 / 32).epsilon(1e-4));
  CHECK(value_of_attention(qa, c) == Approx(1.0 / 96).epsilon(1e-4));
  CHECK(value_of_attention(qi, u) == Approx(21.0 / 512).epsilon(1e-4));
  CHECK(value_of_attention(qi, c) == Approx(3.0 / 512).epsilon(1e-4));
  // Frozen from tests/oracles/grid_oracle.py (direct double sum).
  CHECK(value_of_attention(qa, c) == Approx(0.0104166875).epsilon(1e-12));
  CHECK(value_of_attention(qi, c) == Approx(0.005859390625).epsilon(1e-12));
  CHECK(value_of_attention(qi, u) == Approx(0.041015609375).epsilon(1e-12));
}

TEST_CASE("perfect perception never rewards attention") {
  Grid g(300);
  Pgp p = builtin_pgp(PerfectSpec{}, power_prior(g, 2.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int it = 0; it < 20; ++it) {
    std::vector<double> q(300);
    for (double& x : q) x = d(rng);
    std::sort(q.begin(), q.end());
    CHECK(std::abs(value_of_attention_direct(AllocationRule(g, q), p)) <= 1e-14);
    CHECK(std::abs(value_of_attention(AllocationRule(g, q), p)) <= 1e-14);
  }
}

TEST_CASE("identity rule gives half the mean squared perception error") {
  Grid g(120);
  Pgp p = builtin_pgp(PrelecSpec{0.65, 1.0}, uniform_prior(g));
  double want = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double d = g.midpoint(i) - g.midpoint(j);
      want += p.joint(i, j) * d * d / 2;
    }
  auto id = AllocationRule::from_function(g, [](double x) { return x; });
  // Envelope transfers on the grid add the within-cell term to both sides.
  CHECK(value_of_attention_direct(id, p) == Approx(want).epsilon(1e-9));
  CHECK(value_of_attention(id, p) == Approx(want).epsilon(1e-9));
}

TEST_CASE("mechanism form uses its own transfers") {
  Grid g(200);
  Pgp p = builtin_pgp(ConservatismSpec{0.5}, uniform_prior(g));
  Mechanism sell = sell_the_firm(CostFunction::quadratic(), p.prior());
  CHECK(value_of_attention(sell, p) == Approx(value_of_attention_direct(sell, p)).epsilon(1e-12));
}

TEST_CASE("attention maximizers") {
  Grid g(2000);
  TypeDist u = uniform_prior(g);
  SUBCASE("conservatism pools the tails") {
    MaximizerReport r = attention_maximizers(builtin_pgp(ConservatismSpec{0.5}, u));
    CHECK(r.pi_low_end == 500);
    CHECK(r.pi_high_begin == 1500);
    CHECK(r.max_value == Approx(1.0 / 32).epsilon(1e-6));
  }
  SUBCASE("probability weighting has a unique cutoff at one half") {
    MaximizerReport r = attention_maximizers(builtin_pgp(ProbWeightSpec{0.5}, u));
    REQUIRE(r.threshold_argmax.size() == 1);
    CHECK(r.threshold_argmax[0] == 1000);
    CHECK(r.max_value == Approx(1.0 / 32).epsilon(1e-9));
  }
  SUBCASE("perfect perception: every cutoff maximizes") {
    MaximizerReport r = attention_maximizers(builtin_pgp(PerfectSpec{}, u));
    CHECK(r.max_value == 0.0);
    CHECK(r.threshold_argmax.size() == g.n() + 1);
  }
  SUBCASE("every reported cutoff attains the maximum") {
    MaximizerReport r = attention_maximizers(builtin_pgp(HypeSpec{0.5}, u));
    for (std::size_t k : r.threshold_argmax) CHECK(r.threshold_value[k] >= r.max_value - r.tol);
  }
}

TEST_CASE("binary perception rewards every non-constant rule") {
  Grid g(100);
  Pgp p = binary_perception(uniform_prior(g));
  for (std::size_t k = 1; k < g.n(); k += 7) CHECK(value_of_attention(AllocationRule::threshold(g, k), p) > 0.0);
}

TEST_CASE("achievable range spans the threshold values") {
  Pgp p = builtin_pgp(ProbWeightSpec{0.5}, uniform_prior(Grid(2000)));
  NuRange r = achievable_nu(AttentionWeights(p));
  CHECK(r.lo == Approx(0.0).epsilon(1e-12));
  CHECK(r.hi == Approx(1.0 / 32).epsilon(1e-9));
}
