#include "perception/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "perception/perception.hpp"

namespace perception {
namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;

  // Records the first failure only; the detail line stays short.
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "FAILED: " << what << "; ";
    ok = ok && cond;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(10);
    s << what << " = " << got << " (want " << want << " +- " << tol << ")";
    expect(std::abs(got - want) <= tol, s.str());
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Random monotone rule with plateaus at 0 and 1 about a third of the time.
std::vector<double> random_rule(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-0.3, 1.3);
  std::vector<double> q(n);
  for (double& v : q) v = std::clamp(u(rng), 0.0, 1.0);
  std::sort(q.begin(), q.end());
  return q;
}

std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n, double zero_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (double& v : p) {
    v = u(rng) < zero_prob ? 0.0 : u(rng) + 1e-3;
    s += v;
  }
  if (s == 0.0) {
    p[n / 2] = 1.0;
    s = 1.0;
  }
  for (double& v : p) v /= s;
  return p;
}

Pgp random_pgp(std::mt19937_64& rng, std::size_t n) {
  Grid g(n);
  TypeDist prior(g, random_pmf(rng, n, 0.15));
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = random_pmf(rng, n, 0.5);
    std::copy(row.begin(), row.end(), k.row(i).begin());
  }
  return Pgp(std::move(prior), std::move(k), "random");
}

// 1. Eq. (1) and Eq. (2) agree.
void representation(Check& c, std::size_t) {
  std::mt19937_64 rng(20240101);
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Pgp pgp = random_pgp(rng, 50);
    AllocationRule r(pgp.grid(), random_rule(rng, 50));
    worst = std::max(worst, std::abs(value_of_attention(r, pgp) - value_of_attention_direct(r, pgp)));
  }
  c.expect(worst <= 1e-8, "max |Eq2 - Eq1| = " + fmt("%.3g", worst));
  c.note << "1000 instances, max gap " << fmt("%.2g", worst);
}

// 2. Coarse screening under conservatism.
void coarse_screening(Check& c, std::size_t n) {
  Pgp pgp = builtin_pgp(ConservatismSpec{0.5}, uniform_prior(Grid(n)));
  MaximizerReport rep = attention_maximizers(pgp);
  const double lo = static_cast<double>(rep.pi_low_end) / n;
  const double hi = static_cast<double>(rep.pi_high_begin) / n;
  c.near(lo, 0.25, 1.0 / n, "Pi_low end");
  c.near(hi, 0.75, 1.0 / n, "Pi_high start");
  c.note << "Pi_low=[0," << lo << ") Pi_high=[" << hi << ",1]";
}

// 3. Probability weighting with a linear cost, deterministic cutoff rules.
void efficiency_example(Check& c, std::size_t n) {
  Pgp pgp = builtin_pgp(ProbWeightSpec{0.5}, uniform_prior(Grid(n)));
  EfficiencyProblem ep(pgp, CostFunction::linear(0.25), AllocationFamily::kThreshold);
  c.near(ep.bounds().w_a_star, 9.0 / 32, 1e-3, "W_A*");
  c.near(ep.bounds().w_i_star, 9.0 / 32, 1e-3, "W_I*");
  c.near(ep.kappa_i(), 1.0 / 32, 1e-4, "kappa_I");
  const double kb = ep.kappa_bar().value_or(-1.0);
  c.near(kb, 9.0 / 512, 1e-4, "regime switch");
  c.expect(ep.solve(9.0 / 512 - 2e-4).regime == EfficiencyRegime::kSellFirmAttentive, "attentive below switch");
  c.expect(ep.solve(9.0 / 512 + 2e-4).regime == EfficiencyRegime::kDistortedInattentive, "distorted above switch");

  const EfficiencyOutcome o = ep.solve(0.025);
  c.expect(o.regime == EfficiencyRegime::kDistortedInattentive && o.threshold.has_value(), "threshold rule at 0.025");
  const double p = o.threshold.value_or(0.0);
  const double resid = 0.5 * p * p * (1 - p) * (1 - p) - 0.025;
  c.expect(std::abs(resid) <= 1e-6 && p > 0.25 && p < 0.5, "cutoff residual " + fmt("%.3g", resid));

  double prev = -std::numeric_limits<double>::infinity();
  const double a = 9.0 / 512, b = 1.0 / 32;
  for (int i = 0; i < 20; ++i) {
    const double w = ep.solve(a + (i + 0.5) / 20 * (b - a)).welfare;
    c.expect(w > prev, "welfare increasing at sample " + std::to_string(i));
    prev = w;
  }
  c.note << "kappa_bar=" << fmt("%.8f", kb) << " p(0.025)=" << fmt("%.6f", p) << " resid=" << fmt("%.2g", resid);
}

// 4. Welfare loss of selling the firm to an inattentive agent.
void sell_gap(Check& c, std::size_t n) {
  Pgp pgp = builtin_pgp(ConservatismSpec{0.5}, uniform_prior(Grid(n)));
  const CostFunction cost = CostFunction::quadratic();
  const Mechanism sell = sell_the_firm(cost, pgp.prior());
  const double lhs = inattentive_welfare_objective(pgp, cost).value(sell.rule()) - welfare_bounds(pgp, cost).w_i_star;
  double rhs = 0.0;
  auto f = pgp.f_i();
  auto e = pgp.posterior_mean();
  for (std::size_t j = 0; j < n; ++j) {
    const double d = pgp.grid().midpoint(j) - e[j];
    rhs -= d * d * f[j] / 2.0;
  }
  c.near(lhs, rhs, 1e-6, "welfare gap");
  c.note << "gap=" << fmt("%.10f", lhs) << " formula=" << fmt("%.10f", rhs);
}

// 5. Unbiased PGPs: selling the firm is exactly attention-neutral.
void unbiased_alignment(Check& c, std::size_t n) {
  const Grid g(n);
  const TypeDist u = uniform_prior(g);
  std::vector<double> cuts;
  for (std::size_t k = 5; k < n; k += 5) cuts.push_back(g.boundary(k));
  std::vector<Pgp> pgps{shift_pair_coupling(u), martingale_coupling(u, uniform_band(g, 0.25, 0.75)),
                        partition_garbling(u, cuts)};
  for (const CostFunction& cost : {CostFunction::quadratic(), CostFunction::linear(0.3)}) {
    for (const Pgp& pgp : pgps) {
      EfficiencyProblem ep(pgp, cost);
      const double gap = ep.bounds().w_a_star - ep.bounds().w_i_star;
      c.near(ep.nu_sell(), gap, 1e-6, pgp.label() + " nu(sell) vs W_A*-W_I*");
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 20; ++i) {
        const double w = ep.solve(0.005 * i).welfare;
        c.expect(w <= prev + 1e-12, pgp.label() + " welfare nonincreasing");
        prev = w;
      }
    }
  }
  c.note << "shift, entropic martingale, 5-cell partition; quadratic and linear costs";
}

// 6. Screening constants and regime thresholds.
void screening_constants(Check& c, std::size_t n) {
  const double tol = 1e-4;
  ScreeningModel mu(ScreeningPgp::kRhoU, n, RhoUKernel::kShift);
  ScreeningModel me(ScreeningPgp::kRhoU, n, RhoUKernel::kEntropic);
  ScreeningModel mc(ScreeningPgp::kRhoC, n);
  const ScreeningBenchmarks bu = mu.benchmarks(), bc = mc.benchmarks();
  c.near(bu.profit_a, 1.0 / 12, tol, "profit_A");
  c.near(bu.profit_i, 9.0 / 128, tol, "profit_I");
  c.near(bu.nu_a, 1.0 / 32, tol, "nu_U(q_A)");
  c.near(bc.nu_a, 1.0 / 96, tol, "nu_C(q_A)");
  c.near(bu.nu_i, 21.0 / 512, tol, "nu_U(q_I)");
  c.near(bc.nu_i, 3.0 / 512, tol, "nu_C(q_I)");

  struct Case {
    const ScreeningModel* model;
    ScreeningPgp tag;
    const char* name;
  };
  double profit_u[2] = {0, 0};
  ScreeningThresholds th_u[2];
  int idx = 0;
  for (const Case& k : {Case{&mu, ScreeningPgp::kRhoU, "rho_U/shift"}, Case{&me, ScreeningPgp::kRhoU, "rho_U/entropic"},
                        Case{&mc, ScreeningPgp::kRhoC, "rho_C"}}) {
    const ScreeningThresholds want = screening_thresholds(k.tag);
    const ScreeningThresholds got = k.model->problem().thresholds();
    c.near(got.kappa_low, want.kappa_low, tol, std::string(k.name) + " kappa_low");
    c.near(got.kappa_high, want.kappa_high, tol, std::string(k.name) + " kappa_high");
    const double kappa = 0.5 * (want.kappa_low + want.kappa_high);
    const double lam = screening_lambda(k.tag, kappa);
    const ScreeningSolution s = k.model->problem().solve(kappa);
    c.expect(s.regime == ScreeningRegime::kAttentiveConstrained, std::string(k.name) + " constrained regime");
    c.near(s.profit, 1.0 / 12 - lam * lam / 192, tol, std::string(k.name) + " constrained profit");
    if (k.tag == ScreeningPgp::kRhoU) {
      profit_u[idx] = s.profit;
      th_u[idx++] = got;
    }
  }
  c.near(profit_u[1], profit_u[0], tol, "rho_U kernel drift in profit");
  c.near(th_u[1].kappa_high, th_u[0].kappa_high, tol, "rho_U kernel drift in kappa_high");
  c.near(th_u[1].kappa_low, th_u[0].kappa_low, tol, "rho_U kernel drift in kappa_low");
  c.note << "kappa_high U/C = " << fmt("%.7f", th_u[0].kappa_high) << "/"
         << fmt("%.7f", mc.problem().thresholds().kappa_high) << ", kernel drift "
         << fmt("%.2g", std::abs(profit_u[1] - profit_u[0]));
}

// 7. Carrot (rho_U) and stick (rho_C).
void carrot_stick(Check& c, std::size_t n) {
  for (ScreeningPgp tag : {ScreeningPgp::kRhoU, ScreeningPgp::kRhoC}) {
    ScreeningModel m(tag, n);
    const ScreeningThresholds th = screening_thresholds(tag);
    const double sign = tag == ScreeningPgp::kRhoU ? 1.0 : -1.0;
    const std::string name = to_string(tag);
    double pa = 0.0, pi = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double kappa = th.kappa_low + (i + 1.0) / 51.0 * (th.kappa_high - th.kappa_low);
      const ScreeningSolution s = m.problem().solve(kappa);
      c.expect(s.regime == ScreeningRegime::kAttentiveConstrained, name + " constrained at sample " + std::to_string(i));
      if (i > 0) {
        c.expect(sign * (s.v_a - pa) > 0.0, name + " V_A monotone at sample " + std::to_string(i));
        c.expect(sign * (s.v_i - pi) > 0.0, name + " V_I monotone at sample " + std::to_string(i));
      }
      pa = s.v_a;
      pi = s.v_i;
    }
    const ScreeningSolution lo = m.problem().solve(th.kappa_low);
    c.near(lo.v_a, 1.0 / 24, 1e-4, name + " V_A at kappa_low");
    c.near(lo.v_i, tag == ScreeningPgp::kRhoU ? 1.0 / 96 : 1.0 / 32, 1e-4, name + " V_I at kappa_low");
  }
  c.note << "50 points each; V_A, V_I up under rho_U and down under rho_C";
}

// 8. Hype.
void hype(Check& c, std::size_t n) {
  const HypeEquilibrium eq = optimal_price(1.0, 1.0 / 32);
  c.near(eq.revenue, 0.25, 1e-9, "revenue at (1, 1/32)");
  c.near(eq.buyer_utility, 0.25, 1e-9, "buyer utility at (1, 1/32)");
  const HypeGridCheck gc = hype_grid_check(1.0, eq.price, n);
  c.near(gc.revenue_grid, 0.25, 2.0 / n, "grid revenue");
  c.near(gc.buyer_utility_grid, 0.25, 2.0 / n, "grid buyer utility");
  c.near(gc.nu_grid, 1.0 / 32, 2.0 / n, "grid nu");

  std::vector<double> kappas;
  for (int i = 1; i <= 50; ++i) kappas.push_back(0.004 * i);
  const std::size_t steps = 400;
  const double step = 1.0 / steps + 1e-12;
  for (const OptimalHypeRow& r : optimal_hype(kappas, steps)) {
    const std::string at = " at kappa " + fmt("%.3f", r.kappa);
    c.expect(std::abs(r.h_s_grid - r.h_s_star) <= step, "h_s* grid" + at);
    const bool b_ok = std::abs(r.h_b_grid - r.h_b_star) <= step ||
                      (r.h_b_alternative && std::abs(r.h_b_grid - *r.h_b_alternative) <= step);
    c.expect(b_ok, "h_b* grid" + at);
    if (r.kappa >= 9.0 / 128) continue;
    c.expect(r.h_b_star > r.h_s_star && r.h_s_star > 0.0, "h_b* > h_s* > 0" + at);
    const double d = 1e-7;
    for (int i = 1; i <= 5; ++i) {
      const double h = r.h_s_star + i / 6.0 * (r.h_b_star - r.h_s_star);
      const HypeEquilibrium up = optimal_price(std::min(1.0, h + d), r.kappa);
      const HypeEquilibrium dn = optimal_price(h - d, r.kappa);
      c.expect(up.buyer_utility > dn.buyer_utility, "buyer utility increasing" + at);
      c.expect(up.revenue < dn.revenue, "revenue decreasing" + at);
    }
  }
  c.note << "split (" << eq.revenue << ", " << eq.buyer_utility << "), grid (" << fmt("%.6f", gc.revenue_grid)
         << ", " << fmt("%.6f", gc.buyer_utility_grid) << ")";
}

// 9. Accuracy order.
void accuracy(Check& c, std::size_t n) {
  const Grid g(n);
  const TypeDist u = uniform_prior(g);
  const Pgp rho_c = screening_pgp(ScreeningPgp::kRhoC, n);
  const Pgp rho_u = screening_pgp(ScreeningPgp::kRhoU, n);
  c.expect(is_more_accurate(rho_c, rho_u) == AccuracyOrder::kAMore, "rho_C more accurate than rho_U");

  std::vector<Pgp> hype;
  for (double h : {0.0, 0.25, 0.5, 0.75, 1.0}) hype.push_back(builtin_pgp(HypeSpec{h}, u));
  for (std::size_t i = 0; i + 1 < hype.size(); ++i)
    c.expect(is_more_accurate(hype[i], hype[i + 1]) == AccuracyOrder::kAMore, hype[i].label() + " vs " + hype[i + 1].label());

  auto pw = [&](double a) { return builtin_pgp(ProbWeightSpec{a}, u); };
  const Pgp p025 = pw(0.25), p05 = pw(0.5), p1 = pw(1.0), p2 = pw(2.0), p4 = pw(4.0);
  c.expect(is_more_accurate(p05, p025) == AccuracyOrder::kAMore, "PW 0.5 vs 0.25");
  c.expect(is_more_accurate(p1, p05) == AccuracyOrder::kAMore, "PW 1 vs 0.5");
  c.expect(is_more_accurate(p1, p2) == AccuracyOrder::kAMore, "PW 1 vs 2");
  c.expect(is_more_accurate(p2, p4) == AccuracyOrder::kAMore, "PW 2 vs 4");

  std::mt19937_64 rng(7);
  std::size_t violations = 0;
  double worst = 0.0;
  const std::pair<const Pgp*, const Pgp*> pairs[] = {{&rho_c, &rho_u}, {&hype[1], &hype[3]}, {&p2, &p4}, {&p05, &p025}};
  for (int m = 0; m < 200; ++m) {
    const Mechanism mech = transfers_from_envelope(AllocationRule(g, random_rule(rng, n)));
    for (const auto& [a, b] : pairs) {
      for (int k = 0; k < 20; ++k) {
        const double kappa = 0.005 * k;
        const double d = agent_welfare(mech, kappa, *b) - agent_welfare(mech, kappa, *a);
        worst = std::max(worst, d);
        if (d > 1e-8) ++violations;
      }
    }
  }
  c.expect(violations == 0, std::to_string(violations) + " welfare-dominance violations");
  c.note << "orders hold; dominance violations " << violations << ", worst excess " << fmt("%.2g", worst);
}

// 10. Optimizer against exhaustive search.
void optimizer_oracle(Check& c, std::size_t) {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> nd(2, 12);
  const std::size_t levels = 5;
  double worst_excess = 0.0, worst_quant = 0.0, worst_attention = 0.0;
  int bad = 0;
  for (int it = 0; it < 500; ++it) {
    const std::size_t n = nd(rng);
    const Grid g(n);
    std::vector<double> a(n), mass(n);
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = 2.0 * u(rng) - 1.0;
      mass[j] = u(rng) < 0.1 ? 0.0 : u(rng);
    }
    CostFunction cost = CostFunction::quadratic();
    const int kind = it % 3;
    if (kind == 1) cost = CostFunction::linear(u(rng));
    if (kind == 2) {
      std::vector<double> tab(levels);
      for (std::size_t l = 1; l < levels; ++l) tab[l] = tab[l - 1] + u(rng) * 0.5;
      cost = CostFunction::tabulated(tab);
    }
    const SeparableObjective obj(g, a, mass, cost);
    const AllocationRule engine = maximize_monotone(obj, MonotoneOptions{levels});
    const AllocationRule oracle = brute_force_monotone(obj, levels);
    const double ve = obj.value(engine), vo = obj.value(oracle);
    // Engine optimum snapped to the levels is still monotone, so the oracle
    // beats it; the engine in turn beats the oracle.
    std::vector<double> snapped(engine.q().begin(), engine.q().end());
    for (double& v : snapped) v = std::round(v * (levels - 1)) / (levels - 1);
    const double quant = ve - obj.value(snapped);
    worst_excess = std::max(worst_excess, vo - ve);
    worst_quant = std::max(worst_quant, ve - vo - quant);
    if (vo > ve + 1e-9 || ve - vo > quant + 1e-12) ++bad;

    Pgp pgp = random_pgp(rng, n);
    const AttentionWeights w(pgp);
    const double scan = attention_maximizers(w).max_value;
    const double dp = attention_objective(w).value(brute_force_monotone(attention_objective(w), levels));
    worst_attention = std::max(worst_attention, std::abs(scan - dp));
  }
  c.expect(bad == 0, std::to_string(bad) + " instances outside the quantization bound");
  c.expect(worst_attention <= 1e-12, "threshold scan vs DP gap " + fmt("%.3g", worst_attention));
  c.note << "500 instances; oracle excess " << fmt("%.2g", worst_excess) << ", scan/DP gap " << fmt("%.2g", worst_attention);
}

struct Entry {
  const char* title;
  void (*fn)(Check&, std::size_t);
};

const Entry kEntries[kCriterionCount] = {
    {"representation equivalence", representation},
    {"coarse screening intervals", coarse_screening},
    {"efficiency worked example", efficiency_example},
    {"sell-the-firm gap identity", sell_gap},
    {"unbiased alignment", unbiased_alignment},
    {"screening constants", screening_constants},
    {"carrot and stick", carrot_stick},
    {"hype", hype},
    {"accuracy order", accuracy},
    {"optimizer oracle", optimizer_oracle},
};

}  // namespace

CriterionResult run_criterion(int id, std::size_t n) {
  if (id < 1 || id > kCriterionCount) throw Error(ErrorKind::kSchema, "no acceptance criterion " + std::to_string(id));
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    e.fn(c, n);
  } catch (const std::exception& ex) {
    c.expect(false, std::string("exception: ") + ex.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = c.ok;
  r.detail = c.note.str();
  return r;
}

std::vector<CriterionResult> run_acceptance(std::size_t n) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, n));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] %2d  %-28s (%.2fs)  ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace perception
