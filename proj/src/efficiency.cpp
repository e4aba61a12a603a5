#include "perception/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perception/errors.hpp"

namespace perception {

const char* to_string(EfficiencyRegime r) {
  switch (r) {
    case EfficiencyRegime::kSellFirmAttentive: return "SellFirm-Attentive";
    case EfficiencyRegime::kDistortedInattentive: return "Distorted-Inattentive";
    case EfficiencyRegime::kManageProcessInattentive: return "ManageProcess-Inattentive";
    case EfficiencyRegime::kSellFirmInattentive: return "SellFirm-Inattentive";
  }
  return "?";
}

const char* to_string(AllocationFamily f) {
  return f == AllocationFamily::kThreshold ? "threshold" : "monotone";
}

Mechanism sell_the_firm(const CostFunction& cost, const TypeDist& prior) {
  const Grid& g = prior.grid();
  std::vector<double> q(g.n()), t(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) {
    q[j] = cost.best_response(g.midpoint(j));
    t[j] = cost(q[j]);
  }
  return Mechanism(AllocationRule(g, std::move(q)), std::move(t));
}

std::vector<double> min_attention_completion(std::span<const double> q, const std::vector<bool>& fixed,
                                             std::span<const double> w) {
  const std::size_t n = q.size();
  if (fixed.size() != n || w.size() != n) throw Error(ErrorKind::kDimension, "completion: length mismatch");
  std::vector<double> out(q.begin(), q.end());
  std::size_t j = 0;
  while (j < n) {
    if (fixed[j]) {
      ++j;
      continue;
    }
    const std::size_t g0 = j;
    while (j < n && !fixed[j]) ++j;
    const std::size_t g1 = j;
    const double a = g0 == 0 ? 0.0 : out[g0 - 1];
    const double b = g1 == n ? 1.0 : out[g1];
    // nu contribution: a * sum(w) + (b - a) * sum_{k >= s} w_k; pick s.
    std::size_t best_s = g1;
    double best = 0.0, tail = 0.0;
    for (std::size_t s = g1; s-- > g0;) {
      tail += w[s];
      if (tail < best) {
        best = tail;
        best_s = s;
      }
    }
    for (std::size_t k = g0; k < g1; ++k) out[k] = k < best_s ? a : b;
  }
  return out;
}

ManagedProcess manage_the_process(const Pgp& pgp, const CostFunction& cost) {
  const std::size_t n = pgp.grid().n();
  auto e = pgp.posterior_mean();
  std::vector<double> q(n, 0.0);
  std::vector<bool> fixed(n, false);
  ManagedProcess out;
  std::optional<std::size_t> prev;
  for (std::size_t j = 0; j < n; ++j) {
    if (!pgp.on_support(j)) continue;
    q[j] = cost.best_response(e[j]);
    fixed[j] = true;
    if (prev && q[j] < q[*prev] - 1e-12) {
      out.bad_first = *prev;
      out.bad_second = j;
      return out;
    }
    prev = j;
  }
  AttentionWeights w(pgp);
  auto full = min_attention_completion(q, fixed, w.w());
  out.feasible = true;
  out.mechanism = transfers_from_envelope(AllocationRule(pgp.grid(), std::move(full)));
  return out;
}

WelfareBounds welfare_bounds(const Pgp& pgp, const CostFunction& cost) {
  const Grid& g = pgp.grid();
  WelfareBounds b;
  auto f = pgp.f_i();
  auto e = pgp.posterior_mean();
  for (std::size_t j = 0; j < g.n(); ++j) {
    b.w_a_star += pgp.prior().pmf(j) * cost.max_surplus(g.midpoint(j));
    if (f[j] > 0.0) b.w_i_star += f[j] * cost.max_surplus(e[j]);
  }
  // Attention never lowers welfare, so a negative gap here is round-off.
  b.kappa_star = std::max(0.0, b.w_a_star - b.w_i_star);
  return b;
}

double kappa_i(const Pgp& pgp, const CostFunction& cost) {
  ManagedProcess m = manage_the_process(pgp, cost);
  if (!m.feasible) {
    throw InfeasibleError("managing the process is infeasible: e_I decreases between cells " +
                              std::to_string(m.bad_first) + " and " + std::to_string(m.bad_second),
                          0.0, 0.0);
  }
  return value_of_attention(m.mechanism->rule(), pgp);
}

std::optional<double> effective_threshold(const AllocationRule& rule) {
  const std::size_t n = rule.size();
  std::size_t fractional = 0;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = rule[j];
    if (v > 1e-12 && v < 1.0 - 1e-12) {
      if (++fractional > 1) return std::nullopt;
    }
    total += v;
  }
  return 1.0 - total / static_cast<double>(n);
}

EfficiencyProblem::EfficiencyProblem(Pgp pgp, CostFunction cost, AllocationFamily family)
    : pgp_(std::move(pgp)),
      cost_(std::move(cost)),
      family_(family),
      weights_(pgp_),
      bounds_(welfare_bounds(pgp_, cost_)),
      sell_(sell_the_firm(cost_, pgp_.prior())),
      managed_(manage_the_process(pgp_, cost_)) {
  nu_sell_ = value_of_attention(sell_, pgp_);
  kappa_i_ = managed_.feasible ? weights_.apply(managed_.mechanism->rule().q())
                               : std::numeric_limits<double>::quiet_NaN();
  if (family_ == AllocationFamily::kThreshold && cost_.kind() != CostKind::kLinear)
    throw Error(ErrorKind::kSchema, "threshold allocation family needs a linear cost");
}

double EfficiencyProblem::kappa_i() const {
  if (!managed_.feasible) {
    throw InfeasibleError("managing the process is infeasible: e_I decreases between cells " +
                              std::to_string(managed_.bad_first) + " and " + std::to_string(managed_.bad_second),
                          0.0, 0.0);
  }
  return kappa_i_;
}

ConstrainedSolution EfficiencyProblem::inattentive_branch(double kappa) const {
  if (managed_.feasible && kappa >= kappa_i_) {
    const AllocationRule& r = managed_.mechanism->rule();
    return ConstrainedSolution{r, 0.0, kappa_i_, bounds_.w_i_star, true, false};
  }
  if (family_ == AllocationFamily::kThreshold) return best_threshold(kappa);
  return maximize_with_attention_constraint(inattentive_welfare_objective(pgp_, cost_), weights_, kappa);
}

// Best cutoff rule with nu <= kappa. The cutoff may fall inside cell k - 1,
// which then carries the fraction s of its mass (uniform within the cell).
// The empty rule always qualifies.
ConstrainedSolution EfficiencyProblem::best_threshold(double kappa) const {
  const std::size_t n = pgp_.grid().n();
  const SeparableObjective obj = inattentive_welfare_objective(pgp_, cost_);
  auto w = weights_.w();
  std::vector<double> q(n, 0.0);
  std::size_t best_k = n;
  double best_s = 0.0, best = 0.0, best_nu = 0.0, value = 0.0, nu = 0.0;
  for (std::size_t k = n + 1; k-- > 0;) {
    if (k < n) {
      value += obj.cell_value(k, 1.0);
      nu += w[k];
    }
    // Feasible fractions s of cell k - 1 form an interval [s_lo, s_hi].
    double s_lo = 0.0, s_hi = k > 0 ? 1.0 : 0.0;
    if (k > 0 && w[k - 1] > 0.0) s_hi = std::min(s_hi, (kappa - nu) / w[k - 1]);
    if (k > 0 && w[k - 1] < 0.0) s_lo = std::max(s_lo, (kappa - nu) / w[k - 1]);
    if (k > 0 && w[k - 1] == 0.0 && nu > kappa) s_hi = -1.0;
    if (k == 0 && nu > kappa + 1e-15) continue;
    if (s_lo > s_hi) continue;
    const double cv = k > 0 ? obj.cell_value(k - 1, 1.0) : 0.0;
    const double s = cv > 0.0 ? s_hi : s_lo;
    const double v = value + s * cv;
    if (v > best) {
      best = v;
      best_nu = nu + (k > 0 ? s * w[k - 1] : 0.0);
      best_k = k;
      best_s = s;
    }
  }
  for (std::size_t j = best_k; j < n; ++j) q[j] = 1.0;
  if (best_s > 0.0) q[best_k - 1] = best_s;
  return ConstrainedSolution{AllocationRule(pgp_.grid(), std::move(q)), 0.0, best_nu, best, true, false};
}

EfficiencyOutcome EfficiencyProblem::solve(double kappa) const {
  if (!(kappa >= 0.0)) throw Error(ErrorKind::kSchema, "kappa must be >= 0");
  const double attentive_net = bounds_.w_a_star - kappa;

  if (!managed_.feasible) {
    // No inattentive optimum to compare against; keep selling the firm.
    const bool attentive = nu_sell_ >= kappa;
    EfficiencyOutcome o{kappa, sell_,
                        attentive ? EfficiencyRegime::kSellFirmAttentive : EfficiencyRegime::kSellFirmInattentive,
                        attentive ? attentive_net : inattentive_utility(sell_, pgp_), nu_sell_,
                        effective_threshold(sell_.rule()), attentive_net, std::nullopt, std::nullopt};
    return o;
  }

  ConstrainedSolution inatt = inattentive_branch(kappa);
  auto sell_outcome = [&]() {
    return EfficiencyOutcome{kappa, sell_, EfficiencyRegime::kSellFirmAttentive, attentive_net, nu_sell_,
                             effective_threshold(sell_.rule()), attentive_net, inatt.objective, std::nullopt};
  };
  if (kappa <= bounds_.kappa_star) return sell_outcome();
  if (kappa >= kappa_i_) {
    const Mechanism& m = *managed_.mechanism;
    return EfficiencyOutcome{kappa, m, EfficiencyRegime::kManageProcessInattentive, bounds_.w_i_star, kappa_i_,
                             effective_threshold(m.rule()), attentive_net, bounds_.w_i_star, 0.0};
  }
  // Over-attention region. Ties go to the attentive branch.
  if (attentive_net >= inatt.objective) return sell_outcome();
  return EfficiencyOutcome{kappa, transfers_from_envelope(inatt.rule), EfficiencyRegime::kDistortedInattentive,
                           inatt.objective, inatt.nu, effective_threshold(inatt.rule), attentive_net,
                           inatt.objective, family_ == AllocationFamily::kThreshold ? std::nullopt : std::optional<double>(inatt.lambda)};
}

std::optional<double> EfficiencyProblem::kappa_bar(double tol) const {
  if (!managed_.feasible || !(kappa_i_ > bounds_.kappa_star)) return std::nullopt;
  double lo = std::max(bounds_.kappa_star, 0.0), hi = kappa_i_;
  auto gap = [&](double k) { return (bounds_.w_a_star - k) - inattentive_branch(k).objective; };
  if (gap(lo) < 0.0) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) >= 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

EfficiencyOutcome optimal_mechanism(const Pgp& pgp, const CostFunction& cost, double kappa,
                                    AllocationFamily family) {
  return EfficiencyProblem(pgp, cost, family).solve(kappa);
}

}  // namespace perception
