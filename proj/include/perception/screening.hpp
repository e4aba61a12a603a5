#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perception/attention.hpp"
#include "perception/cost.hpp"
#include "perception/mechanism.hpp"
#include "perception/monotone.hpp"
#include "perception/pgp.hpp"

namespace perception {

enum class ScreeningPgp { kRhoU, kRhoC };
// Which unbiased kernel realizes rho_U; results must not depend on it.
enum class RhoUKernel { kShift, kEntropic };
enum class ScreeningRegime { kAttentiveUnconstrained, kAttentiveConstrained, kInattentive };

const char* to_string(ScreeningPgp p);
const char* to_string(ScreeningRegime r);

struct ScreeningThresholds {
  double kappa_low = 0.0;
  double kappa_high = 0.0;
};
// 1/32 and sqrt(5/2)/96 + 1/32 for rho_U; 1/96 and sqrt(5/2)/96 + 1/96 for rho_C.
ScreeningThresholds screening_thresholds(ScreeningPgp tag);
// 96 kappa - 3 (rho_U) or 96 kappa - 1 (rho_C).
double screening_lambda(ScreeningPgp tag, double kappa);

struct ScreeningSolution {
  std::string pgp_tag;
  double kappa = 0.0;
  AllocationRule rule;
  ScreeningRegime regime;
  double profit = 0.0;
  double v_a = 0.0;
  double v_i = 0.0;
  double nu = 0.0;
  std::optional<double> lambda;
  // Constrained regime only: the generic optimizer's answer for comparison.
  std::optional<double> solver_lambda;
  std::optional<double> solver_sup_gap;
};

struct ScreeningBenchmarks {
  AllocationRule q_a;
  AllocationRule q_i;  // flat at 3/4 above 3/4
  double profit_a = 0.0;
  double profit_i = 0.0;
  double nu_a = 0.0;
  double nu_i = 0.0;
};

// Revenue screening for an arbitrary PGP and cost, solved through the
// monotone optimizer. Transfers follow the envelope with outside utility 0.
class ScreeningProblem {
 public:
  ScreeningProblem(Pgp pgp, CostFunction cost);

  const Pgp& pgp() const { return pgp_; }
  const AttentionWeights& weights() const { return weights_; }
  const SeparableObjective& attentive_objective() const { return obj_a_; }
  const SeparableObjective& inattentive_objective() const { return obj_i_; }

  // Unconstrained optima. The inattentive rule takes the nu-minimizing values
  // on cells where revenue is indifferent.
  const AllocationRule& q_attentive() const { return q_a_; }
  const AllocationRule& q_inattentive() const { return q_i_; }

  ScreeningSolution solve(double kappa) const;
  // kappa_low = nu(q_A); kappa_high = profit crossing, by bisection.
  ScreeningThresholds thresholds(double tol = 1e-10) const;

  // Fills profit, V_A, V_I and nu for a rule in a given state.
  ScreeningSolution evaluate(const AllocationRule& rule, double kappa, ScreeningRegime regime) const;

 private:
  std::optional<ConstrainedSolution> attentive_branch(double kappa) const;
  ConstrainedSolution inattentive_branch(double kappa) const;

  Pgp pgp_;
  CostFunction cost_;
  AttentionWeights weights_;
  SeparableObjective obj_a_, obj_i_;
  AllocationRule q_a_, q_i_;
};

Pgp screening_pgp(ScreeningPgp tag, std::size_t n = 2000, RhoUKernel kernel = RhoUKernel::kShift);

// The fixed scenario: uniform prior, C(x) = x^2/2, F_I uniform on [1/4,3/4].
class ScreeningModel {
 public:
  explicit ScreeningModel(ScreeningPgp tag, std::size_t n = 2000, RhoUKernel kernel = RhoUKernel::kShift);

  ScreeningPgp tag() const { return tag_; }
  const ScreeningProblem& problem() const { return problem_; }

  ScreeningBenchmarks benchmarks() const;
  // Regime and rule from the closed forms, evaluated on the grid, with the
  // optimizer's answer attached in the constrained regime.
  ScreeningSolution solve(double kappa) const;

 private:
  ScreeningPgp tag_;
  ScreeningProblem problem_;
};

ScreeningBenchmarks screening_benchmarks(std::size_t n = 2000);
ScreeningSolution optimal_screening(ScreeningPgp tag, double kappa, std::size_t n = 2000,
                                    RhoUKernel kernel = RhoUKernel::kShift);
std::vector<ScreeningSolution> carrot_stick_curves(const ScreeningModel& model, std::span<const double> kappas);

}  // namespace perception
