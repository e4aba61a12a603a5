#include "perception/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perception/constructions.hpp"
#include "perception/efficiency.hpp"
#include "perception/errors.hpp"

namespace perception {

const char* to_string(ScreeningPgp p) { return p == ScreeningPgp::kRhoU ? "rho_U" : "rho_C"; }

const char* to_string(ScreeningRegime r) {
  switch (r) {
    case ScreeningRegime::kAttentiveUnconstrained: return "Attentive-Unconstrained";
    case ScreeningRegime::kAttentiveConstrained: return "Attentive-Constrained";
    case ScreeningRegime::kInattentive: return "Inattentive";
  }
  return "?";
}

ScreeningThresholds screening_thresholds(ScreeningPgp tag) {
  const double base = tag == ScreeningPgp::kRhoU ? 1.0 / 32.0 : 1.0 / 96.0;
  return {base, std::sqrt(2.5) / 96.0 + base};
}

double screening_lambda(ScreeningPgp tag, double kappa) {
  return 96.0 * kappa - (tag == ScreeningPgp::kRhoU ? 3.0 : 1.0);
}

namespace {

AllocationRule inattentive_optimum(const SeparableObjective& obj, const Pgp& pgp, const AttentionWeights& w) {
  AllocationRule raw = maximize_monotone(obj);
  // Revenue ignores off-support cells whose payoff coefficient vanishes
  // (above the support, where 1 - F_I = 0). Pick the least attention there.
  std::vector<bool> fixed(raw.size(), true);
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (!pgp.on_support(j) && std::abs(obj.linear()[j]) <= 1e-15) fixed[j] = false;
  }
  return AllocationRule(pgp.grid(), min_attention_completion(raw.q(), fixed, w.w()));
}

}  // namespace

ScreeningProblem::ScreeningProblem(Pgp pgp, CostFunction cost)
    : pgp_(std::move(pgp)),
      cost_(std::move(cost)),
      weights_(pgp_),
      obj_a_(revenue_objective(pgp_.grid(), pgp_.prior().pmf(), cost_)),
      obj_i_(revenue_objective(pgp_.grid(), pgp_.f_i(), cost_)),
      q_a_(maximize_monotone(obj_a_)),
      q_i_(inattentive_optimum(obj_i_, pgp_, weights_)) {}

ScreeningSolution ScreeningProblem::evaluate(const AllocationRule& rule, double kappa, ScreeningRegime regime) const {
  const Mechanism mech = transfers_from_envelope(rule);
  ScreeningSolution s{.pgp_tag = pgp_.label(), .kappa = kappa, .rule = rule, .regime = regime, .profit = 0.0, .v_a = 0.0, .v_i = 0.0, .nu = 0.0, .lambda = {}, .solver_lambda = {}, .solver_sup_gap = {}};
  const bool attentive = regime != ScreeningRegime::kInattentive;
  s.profit = attentive ? obj_a_.value(rule) : obj_i_.value(rule);
  s.v_a = attentive_utility(mech, pgp_.prior());
  s.v_i = inattentive_utility(mech, pgp_);
  s.nu = weights_.apply(rule.q());
  return s;
}

std::optional<ConstrainedSolution> ScreeningProblem::attentive_branch(double kappa) const {
  try {
    return maximize_with_attention_constraint(obj_a_, weights_, kappa);
  } catch (const InfeasibleError&) {
    return std::nullopt;  // no rule reaches kappa; attention cannot be induced
  }
}

ConstrainedSolution ScreeningProblem::inattentive_branch(double kappa) const {
  const double nu_i = weights_.apply(q_i_.q());
  if (nu_i <= kappa) return ConstrainedSolution{q_i_, 0.0, nu_i, obj_i_.value(q_i_), true, false};
  return maximize_with_attention_constraint(obj_i_, weights_, kappa);
}

ScreeningSolution ScreeningProblem::solve(double kappa) const {
  const double nu_a = weights_.apply(q_a_.q());
  if (kappa <= nu_a) return evaluate(q_a_, kappa, ScreeningRegime::kAttentiveUnconstrained);
  auto att = attentive_branch(kappa);
  ConstrainedSolution inatt = inattentive_branch(kappa);
  if (att && att->objective >= inatt.objective) {
    ScreeningSolution s = evaluate(att->rule, kappa, ScreeningRegime::kAttentiveConstrained);
    s.lambda = att->lambda;
    return s;
  }
  ScreeningSolution s = evaluate(inatt.rule, kappa, ScreeningRegime::kInattentive);
  if (inatt.lambda != 0.0) s.lambda = inatt.lambda;
  return s;
}

ScreeningThresholds ScreeningProblem::thresholds(double tol) const {
  ScreeningThresholds t;
  t.kappa_low = weights_.apply(q_a_.q());
  double lo = t.kappa_low;
  double hi = achievable_nu(weights_).hi;
  auto attentive_wins = [&](double k) {
    auto att = attentive_branch(k);
    return att && att->objective >= inattentive_branch(k).objective;
  };
  if (attentive_wins(hi)) {
    t.kappa_high = hi;
    return t;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (attentive_wins(mid)) lo = mid; else hi = mid;
  }
  t.kappa_high = 0.5 * (lo + hi);
  return t;
}

Pgp screening_pgp(ScreeningPgp tag, std::size_t n, RhoUKernel kernel) {
  const TypeDist prior = uniform_prior(make_grid(n));
  if (tag == ScreeningPgp::kRhoC) {
    Pgp p = builtin_pgp(ConservatismSpec{0.5}, prior);
    return Pgp(prior, p.kernel(), "rho_C");
  }
  if (kernel == RhoUKernel::kShift) {
    Pgp p = shift_pair_coupling(prior);
    return Pgp(prior, p.kernel(), "rho_U");
  }
  Pgp p = martingale_coupling(prior, uniform_band(prior.grid(), 0.25, 0.75));
  return Pgp(prior, p.kernel(), "rho_U");
}

namespace {

double q_attentive(double x) { return std::max(0.0, 2.0 * x - 1.0); }

double q_inattentive_flat(double x) {
  if (x <= 0.375) return 0.0;
  if (x <= 0.75) return 2.0 * x - 0.75;
  return 0.75;
}

double q_constrained(ScreeningPgp tag, double lambda, double x) {
  if (x <= 0.5) return 0.0;
  if (x < 0.75) {
    return tag == ScreeningPgp::kRhoU ? (2.0 + lambda) * x - (1.0 + 0.5 * lambda)
                                      : (2.0 - lambda) * x - (1.0 - 0.5 * lambda);
  }
  return (2.0 - lambda) * x - (1.0 - lambda);
}

}  // namespace

ScreeningModel::ScreeningModel(ScreeningPgp tag, std::size_t n, RhoUKernel kernel)
    : tag_(tag), problem_(screening_pgp(tag, n, kernel), CostFunction::quadratic()) {}

ScreeningBenchmarks ScreeningModel::benchmarks() const {
  const Grid& g = problem_.pgp().grid();
  AllocationRule qa = AllocationRule::from_function(g, q_attentive);
  AllocationRule qi = AllocationRule::from_function(g, q_inattentive_flat);
  const auto& w = problem_.weights();
  return {qa,
          qi,
          problem_.attentive_objective().value(qa),
          problem_.inattentive_objective().value(qi),
          w.apply(qa.q()),
          w.apply(qi.q())};
}

ScreeningSolution ScreeningModel::solve(double kappa) const {
  if (!(kappa >= 0.0)) throw Error(ErrorKind::kSchema, "kappa must be >= 0");
  const Grid& g = problem_.pgp().grid();
  const ScreeningThresholds th = screening_thresholds(tag_);
  if (kappa <= th.kappa_low) {
    return problem_.evaluate(AllocationRule::from_function(g, q_attentive), kappa,
                             ScreeningRegime::kAttentiveUnconstrained);
  }
  if (kappa >= th.kappa_high) {
    return problem_.evaluate(AllocationRule::from_function(g, q_inattentive_flat), kappa,
                             ScreeningRegime::kInattentive);
  }
  const double lambda = screening_lambda(tag_, kappa);
  const ScreeningPgp tag = tag_;
  AllocationRule rule = AllocationRule::from_function(g, [&](double x) { return q_constrained(tag, lambda, x); });
  ScreeningSolution s = problem_.evaluate(rule, kappa, ScreeningRegime::kAttentiveConstrained);
  s.lambda = lambda;
  const ConstrainedSolution num =
      maximize_with_attention_constraint(problem_.attentive_objective(), problem_.weights(), kappa);
  double gap = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) gap = std::max(gap, std::abs(rule[j] - num.rule[j]));
  s.solver_lambda = num.lambda;
  s.solver_sup_gap = gap;
  return s;
}

ScreeningBenchmarks screening_benchmarks(std::size_t n) {
  return ScreeningModel(ScreeningPgp::kRhoU, n).benchmarks();
}

ScreeningSolution optimal_screening(ScreeningPgp tag, double kappa, std::size_t n, RhoUKernel kernel) {
  return ScreeningModel(tag, n, kernel).solve(kappa);
}

std::vector<ScreeningSolution> carrot_stick_curves(const ScreeningModel& model, std::span<const double> kappas) {
  std::vector<ScreeningSolution> out;
  out.reserve(kappas.size());
  for (double k : kappas) out.push_back(model.solve(k));
  return out;
}

}  // namespace perception
