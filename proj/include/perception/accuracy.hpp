#pragma once

#include <span>
#include <vector>

#include "perception/mechanism.hpp"
#include "perception/pgp.hpp"

namespace perception {

// S(b_k) for k = 0..n: tail integral of F_I (trapezoid, same quadrature as
// AttentionWeights) plus the tail of (m_j - e_j) f_j.
class SCurve {
 public:
  explicit SCurve(const Pgp& pgp);
  const Grid& grid() const { return grid_; }
  std::span<const double> s() const { return s_; }
  double at(std::size_t k) const { return s_[k]; }

 private:
  Grid grid_;
  std::vector<double> s_;
};

SCurve s_statistic(const Pgp& pgp);

// Tail integral of the prior CDF, same quadrature: sum_{j>=k} avg(F) / n.
std::vector<double> prior_tail_integral(const TypeDist& prior);

enum class AccuracyOrder { kAMore, kBMore, kEqual, kIncomparable };
const char* to_string(AccuracyOrder o);

double default_accuracy_tol(const Grid& grid);

// Pointwise comparison of S curves. Lower S means more accurate. tol < 0
// selects default_accuracy_tol. Different priors are an invalid comparison.
AccuracyOrder is_more_accurate(const Pgp& a, const Pgp& b, double tol = -1.0);

// max{V_A - kappa, V_I}; kappa may be +infinity.
double agent_welfare(const Mechanism& mech, double kappa, const Pgp& pgp);

}  // namespace perception
