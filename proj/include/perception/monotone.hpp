#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "perception/attention.hpp"
#include "perception/cost.hpp"
#include "perception/distribution.hpp"
#include "perception/mechanism.hpp"
#include "perception/pgp.hpp"

namespace perception {

// g_j(q) = linear_j * q - mass_j * C(q), mass_j >= 0.
class SeparableObjective {
 public:
  SeparableObjective(Grid grid, std::vector<double> linear, std::vector<double> mass, CostFunction cost);

  const Grid& grid() const { return grid_; }
  std::span<const double> linear() const { return linear_; }
  std::span<const double> mass() const { return mass_; }
  const CostFunction& cost() const { return cost_; }

  double cell_value(std::size_t j, double q) const { return linear_[j] * q - mass_[j] * cost_(q); }
  double value(std::span<const double> q) const;
  double value(const AllocationRule& r) const { return value(r.q()); }

  // Adds lambda * w_j to every linear coefficient.
  SeparableObjective tilted(std::span<const double> w, double lambda) const;

 private:
  Grid grid_;
  std::vector<double> linear_, mass_;
  CostFunction cost_;
};

// sum_j p_j (m_j q_j - C(q_j)).
SeparableObjective attentive_welfare_objective(const TypeDist& prior, const CostFunction& cost);
// sum_j f_j (e_j q_j - C(q_j)), written with first moments.
SeparableObjective inattentive_welfare_objective(const Pgp& pgp, const CostFunction& cost);
// Seller revenue net of cost with envelope transfers (outside utility 0) when
// reports follow report_pmf: sum_j q_j [m_j g_j - (1 - avg G_j)/n] - g_j C(q_j).
SeparableObjective revenue_objective(const Grid& grid, std::span<const double> report_pmf,
                                     const CostFunction& cost);
// sum_j w_j q_j.
SeparableObjective attention_objective(const AttentionWeights& w);

// Weighted isotonic regression (pool adjacent violators): minimizes
// sum_j weight_j (x_j - y_j)^2 over nondecreasing x. weights > 0.
std::vector<double> weighted_pav(std::span<const double> y, std::span<const double> weight);

struct MonotoneOptions {
  std::size_t levels = 201;  // DP levels for tabulated costs
};

AllocationRule maximize_monotone(const SeparableObjective& obj, const MonotoneOptions& opts = {});

struct ConstraintOptions {
  double band = 1e-7;
  std::size_t levels = 201;
  int max_bisection = 200;
};

struct ConstrainedSolution {
  AllocationRule rule;
  double lambda = 0.0;
  double nu = 0.0;
  double objective = 0.0;
  bool converged = false;  // |nu - kappa| <= band
  bool mixed = false;      // convex mix of the two bracketing Lagrangian rules
};

// Maximizes obj subject to nu(q) = kappa by a Lagrangian tilt g_j + lambda w_j q.
// Throws InfeasibleError (carrying the achievable nu range) when kappa is
// outside it.
ConstrainedSolution maximize_with_attention_constraint(const SeparableObjective& obj,
                                                       const AttentionWeights& w, double kappa,
                                                       const ConstraintOptions& opts = {});

struct BruteForceConstraint {
  std::vector<double> weights;
  double kappa = 0.0;
  double band = 0.0;
};

// Exhaustive search over nondecreasing rules with values in {0, 1/(M-1), ..., 1}.
// n <= 14 and M <= 6.
AllocationRule brute_force_monotone(const SeparableObjective& obj, std::size_t levels,
                                    const std::optional<BruteForceConstraint>& constraint = std::nullopt);

}  // namespace perception
