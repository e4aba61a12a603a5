#pragma once

#include <optional>
#include <span>
#include <vector>

#include "perception/attention.hpp"
#include "perception/cost.hpp"
#include "perception/mechanism.hpp"
#include "perception/monotone.hpp"
#include "perception/pgp.hpp"

namespace perception {

enum class EfficiencyRegime {
  kSellFirmAttentive,
  kDistortedInattentive,
  kManageProcessInattentive,
  // Only when managing the process is infeasible and the agent ignores the
  // sell-the-firm mechanism.
  kSellFirmInattentive,
};
const char* to_string(EfficiencyRegime r);

// q_j = smallest argmax m_j x - C(x), t_j = C(q_j).
Mechanism sell_the_firm(const CostFunction& cost, const TypeDist& prior);

struct ManagedProcess {
  bool feasible = false;
  std::optional<Mechanism> mechanism;
  // Offending support cells when infeasible: q(first) > q(second).
  std::size_t bad_first = 0, bad_second = 0;
};

// Argmax at e_I on support cells; the off-support gaps are filled with the
// monotone completion that minimizes nu. Envelope transfers, outside utility 0.
ManagedProcess manage_the_process(const Pgp& pgp, const CostFunction& cost);

// Fills cells where fixed[j] is false so that the rule is monotone and
// sum_j w_j q_j is smallest. Each gap between fixed values a <= b is a single
// step from a to b; the step position is searched exactly.
std::vector<double> min_attention_completion(std::span<const double> q, const std::vector<bool>& fixed,
                                             std::span<const double> w);

struct WelfareBounds {
  double w_a_star = 0.0;
  double w_i_star = 0.0;
  double kappa_star = 0.0;
};
WelfareBounds welfare_bounds(const Pgp& pgp, const CostFunction& cost);

// nu of the nu-minimizing manage-the-process rule. Throws InfeasibleError if
// e_I makes the support assignment non-monotone.
double kappa_i(const Pgp& pgp, const CostFunction& cost);

struct EfficiencyOutcome {
  double kappa = 0.0;
  Mechanism mechanism;
  EfficiencyRegime regime;
  double welfare = 0.0;
  double nu = 0.0;
  std::optional<double> threshold;  // cutoff of a (near-)threshold rule
  double welfare_attentive_net = 0.0;           // W_A* - kappa
  std::optional<double> welfare_inattentive;    // best welfare among rules with nu <= kappa
  std::optional<double> lambda;
};

// Which allocation rules the designer may use.
//   kMonotone: every nondecreasing q with values in [0,1].
//   kThreshold: deterministic 0/1 cutoff rules only. Needs a linear cost, so
//     that selling the firm and managing the process are cutoffs already.
enum class AllocationFamily { kMonotone, kThreshold };
const char* to_string(AllocationFamily f);

// Precomputes everything that does not depend on kappa.
class EfficiencyProblem {
 public:
  EfficiencyProblem(Pgp pgp, CostFunction cost, AllocationFamily family = AllocationFamily::kMonotone);
  AllocationFamily family() const { return family_; }

  const Pgp& pgp() const { return pgp_; }
  const AttentionWeights& weights() const { return weights_; }
  const WelfareBounds& bounds() const { return bounds_; }
  const Mechanism& sell() const { return sell_; }
  const ManagedProcess& managed() const { return managed_; }
  bool manage_feasible() const { return managed_.feasible; }
  double nu_sell() const { return nu_sell_; }
  // Throws if managing the process is infeasible.
  double kappa_i() const;

  // Best inattentive welfare subject to nu <= kappa, with its rule.
  ConstrainedSolution inattentive_branch(double kappa) const;
  EfficiencyOutcome solve(double kappa) const;
  // Crossing of W_A* - kappa and the constrained inattentive welfare inside
  // (kappa*, kappa_I); empty when that interval is empty.
  std::optional<double> kappa_bar(double tol = 1e-9) const;

 private:
  ConstrainedSolution best_threshold(double kappa) const;

  Pgp pgp_;
  CostFunction cost_;
  AllocationFamily family_;
  AttentionWeights weights_;
  WelfareBounds bounds_;
  Mechanism sell_;
  ManagedProcess managed_;
  double nu_sell_ = 0.0;
  double kappa_i_ = 0.0;
};

EfficiencyOutcome optimal_mechanism(const Pgp& pgp, const CostFunction& cost, double kappa,
                                    AllocationFamily family = AllocationFamily::kMonotone);

// Cutoff of a rule that is 0 then 1 with at most one fractional cell:
// 1 - sum_j q_j / n. Empty otherwise.
std::optional<double> effective_threshold(const AllocationRule& rule);

}  // namespace perception
