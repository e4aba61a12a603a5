#pragma once

#include <functional>
#include <span>
#include <vector>

#include "perception/grid.hpp"
#include "perception/distribution.hpp"
#include "perception/pgp.hpp"

namespace perception {

// Nondecreasing allocation by perception cell, values in [0,1].
class AllocationRule {
 public:
  // Throws kIcViolation if q decreases by more than 1e-12 or leaves [0,1].
  AllocationRule(Grid grid, std::vector<double> q);

  // q_j = 1 for j >= k, 0 below (k in 0..n).
  static AllocationRule threshold(const Grid& grid, std::size_t k);
  static AllocationRule constant(const Grid& grid, double c);
  // q_j = f(m_j), clamped to [0,1].
  static AllocationRule from_function(const Grid& grid, const std::function<double(double)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> q() const { return q_; }
  double operator[](std::size_t j) const { return q_[j]; }
  std::size_t size() const { return q_.size(); }

 private:
  Grid grid_;
  std::vector<double> q_;
};

// Direct mechanism (q, t). U(r|j) = m_j q_r - t_r.
class Mechanism {
 public:
  // Explicit transfers; IC is checked with slack 1e-9.
  Mechanism(AllocationRule rule, std::vector<double> transfers);

  const AllocationRule& rule() const { return rule_; }
  const Grid& grid() const { return rule_.grid(); }
  std::span<const double> transfers() const { return t_; }
  // Utility of the type at 0 reporting cell 0, i.e. -t_0.
  double outside_utility() const { return -t_[0]; }

  double perceived_utility(std::size_t report, std::size_t perception) const {
    return rule_.grid().midpoint(perception) * rule_[report] - t_[report];
  }
  // max_{r, j} U(r|j) - U(j|j); zero for an IC mechanism.
  double ic_violation() const;

 private:
  AllocationRule rule_;
  std::vector<double> t_;
};

// t_j = m_j q_j - (sum_{k<j} q_k/n + q_j (m_j - b_j)) - u0.
Mechanism transfers_from_envelope(const AllocationRule& rule, double outside_utility = 0.0);

double attentive_utility(const Mechanism& mech, const TypeDist& prior);
// Uses the posterior first moments: sum_j (M_j q_j - f_I,j t_j).
double inattentive_utility(const Mechanism& mech, const Pgp& pgp);
// Definitional double sum over the joint; O(n^2).
double inattentive_utility_direct(const Mechanism& mech, const Pgp& pgp);

// Expected transfer minus cost when reports are distributed by pmf.
double expected_profit(const Mechanism& mech, std::span<const double> report_pmf,
                       const std::function<double(double)>& cost);

}  // namespace perception
