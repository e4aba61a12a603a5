#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "perception/perception.hpp"

using namespace perception;
using doctest::Approx;

namespace {

double sup_gap(const AllocationRule& r, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j)
    worst = std::max(worst, std::abs(r[j] - std::clamp(f(r.grid().midpoint(j)), 0.0, 1.0)));
  return worst;
}

}  // namespace

TEST_CASE("closed-form thresholds") {
  const ScreeningThresholds u = screening_thresholds(ScreeningPgp::kRhoU);
  const ScreeningThresholds c = screening_thresholds(ScreeningPgp::kRhoC);
  CHECK(u.kappa_low == 1.0 / 32);
  CHECK(u.kappa_high == Approx(std::sqrt(2.5) / 96 + 1.0 / 32));
  CHECK(c.kappa_low == Approx(1.0 / 96));
  CHECK(c.kappa_high == Approx(std::sqrt(2.5) / 96 + 1.0 / 96));
  CHECK(screening_lambda(ScreeningPgp::kRhoU, 1.0 / 24) == Approx(1.0));
}

TEST_CASE("benchmarks") {
  ScreeningBenchmarks b = screening_benchmarks(2000);
  CHECK(b.profit_a == Approx(1.0 / 12).epsilon(1e-5));
  CHECK(b.profit_i == Approx(9.0 / 128).epsilon(1e-5));
  CHECK(b.nu_a == Approx(1.0 / 32).epsilon(1e-5));
  CHECK(b.nu_i == Approx(21.0 / 512).epsilon(1e-5));
  // Zero below 1/4 and flat at 3/4 above 3/4.
  const Grid& g = b.q_i.grid();
  CHECK(b.q_i[g.cell_of(0.1)] == 0.0);
  CHECK(b.q_i[g.cell_of(0.9)] == Approx(0.75).epsilon(1e-3));
}

TEST_CASE("rho_U regimes") {
  ScreeningModel m(ScreeningPgp::kRhoU, 2000);
  SUBCASE("cheap attention: q_A, attentive") {
    ScreeningSolution s = m.solve(0.02);
    CHECK(s.regime == ScreeningRegime::kAttentiveUnconstrained);
    CHECK(sup_gap(s.rule, [](double x) { return 2 * x - 1; }) <= 1e-3);
    CHECK(s.v_a == Approx(1.0 / 24).epsilon(1e-4));
    CHECK(s.v_i == Approx(1.0 / 96).epsilon(1e-4));
  }
  SUBCASE("expensive attention: q_I, inattentive") {
    ScreeningSolution s = m.solve(0.06);
    CHECK(s.regime == ScreeningRegime::kInattentive);
    CHECK(s.profit == Approx(9.0 / 128).epsilon(1e-4));
  }
  SUBCASE("kappa = 1/24: lambda = 1") {
    ScreeningSolution s = m.solve(1.0 / 24);
    CHECK(s.regime == ScreeningRegime::kAttentiveConstrained);
    CHECK(s.lambda.value() == Approx(1.0));
    CHECK(s.solver_lambda.value() == Approx(1.0).epsilon(1e-3));
    CHECK(s.profit == Approx(1.0 / 12 - 1.0 / 192).epsilon(1e-4));
    const double lam = 1.0;
    CHECK(sup_gap(s.rule, [&](double x) {
            if (x < 0.5) return 0.0;
            return x < 0.75 ? (2 + lam) * x - (1 + lam / 2) : (2 - lam) * x - (1 - lam);
          }) <= 1e-3);
    CHECK(s.solver_sup_gap.value() <= 1e-3);
  }
  SUBCASE("intermediate slopes: V_A 3/2, V_I 1/2") {
    ScreeningSolution a = m.solve(0.035), b = m.solve(0.045);
    CHECK((b.v_a - a.v_a) / 0.01 == Approx(1.5).epsilon(1e-2));
    CHECK((b.v_i - a.v_i) / 0.01 == Approx(0.5).epsilon(1e-2));
    CHECK(a.v_a == Approx(1.5 * 0.035 - 1.0 / 192).epsilon(1e-4));
  }
}

TEST_CASE("rho_C regimes") {
  ScreeningModel m(ScreeningPgp::kRhoC, 2000);
  CHECK(m.solve(0.005).regime == ScreeningRegime::kAttentiveUnconstrained);
  CHECK(m.solve(0.005).v_i == Approx(1.0 / 32).epsilon(1e-4));
  const double kappa = 0.02, lam = 96 * kappa - 1;
  ScreeningSolution s = m.solve(kappa);
  CHECK(s.regime == ScreeningRegime::kAttentiveConstrained);
  CHECK(sup_gap(s.rule, [&](double x) {
          if (x < 0.5) return 0.0;
          return x < 0.75 ? (2 - lam) * x - (1 - lam / 2) : (2 - lam) * x - (1 - lam);
        }) <= 1e-3);
  CHECK(s.v_a == Approx(3.0 / 64 - kappa / 2).epsilon(1e-4));
  CHECK(m.solve(0.03).regime == ScreeningRegime::kInattentive);
}

TEST_CASE("numeric route agrees with the closed form") {
  ScreeningModel m(ScreeningPgp::kRhoC, 2000);
  const ScreeningThresholds t = m.problem().thresholds();
  CHECK(t.kappa_low == Approx(1.0 / 96).epsilon(1e-5));
  CHECK(t.kappa_high == Approx(std::sqrt(2.5) / 96 + 1.0 / 96).epsilon(1e-5));
  for (double kappa : {0.005, 0.015, 0.02, 0.03}) {
    ScreeningSolution a = m.solve(kappa), b = m.problem().solve(kappa);
    CHECK(a.regime == b.regime);
    CHECK(a.profit == Approx(b.profit).epsilon(1e-6));
  }
}

TEST_CASE("generic problem: other PGPs and costs") {
  // A tabulated quadratic cost lands close to the quadratic answer.
  Pgp u = screening_pgp(ScreeningPgp::kRhoU, 400);
  std::vector<double> tab(101);
  for (int l = 0; l <= 100; ++l) tab[l] = (l / 100.0) * (l / 100.0) / 2;
  ScreeningProblem p(u, CostFunction::tabulated(tab));
  ScreeningProblem q(u, CostFunction::quadratic());
  CHECK(p.solve(0.02).profit == Approx(q.solve(0.02).profit).epsilon(1e-4));
}

TEST_CASE("carrot and stick curves") {
  ScreeningModel m(ScreeningPgp::kRhoU, 2000);
  std::vector<double> ks{0.035, 0.04, 0.045};
  auto rows = carrot_stick_curves(m, ks);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].v_a < rows[1].v_a);
  CHECK(rows[1].v_i < rows[2].v_i);
}
