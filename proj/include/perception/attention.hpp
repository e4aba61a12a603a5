#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "perception/mechanism.hpp"
#include "perception/pgp.hpp"

namespace perception {

// nu(q) = sum_j q_j w_j. w splits into an information part (cell integral of
// F_I - F, trapezoid on boundary CDFs) and a bias part (m_j - e_j) f_j.
class AttentionWeights {
 public:
  explicit AttentionWeights(const Pgp& pgp);

  const Grid& grid() const { return grid_; }
  std::span<const double> w() const { return w_; }
  std::span<const double> information() const { return info_; }
  std::span<const double> bias() const { return bias_; }

  double apply(std::span<const double> q) const;
  // T_k = sum_{j>=k} w_j for k = 0..n; T_k is nu of the threshold rule at b_k.
  std::vector<double> threshold_values() const;

 private:
  Grid grid_;
  std::vector<double> w_, info_, bias_;
};

AttentionWeights attention_weights(const Pgp& pgp);

// Eq. (2) route: sum_j q_j w_j.
double value_of_attention(const AllocationRule& rule, const Pgp& pgp);
double value_of_attention(const AllocationRule& rule, const AttentionWeights& w);
// V_A - V_I with the mechanism's own transfers (which need not be envelope
// transfers, e.g. selling the firm).
double value_of_attention(const Mechanism& mech, const Pgp& pgp);

// Eq. (1) route: sum_ij mu_ij [U(i|i) - U(j|i)] under envelope transfers.
double value_of_attention_direct(const AllocationRule& rule, const Pgp& pgp);
double value_of_attention_direct(const Mechanism& mech, const Pgp& pgp);

struct MaximizerReport {
  double max_value = 0.0;
  double tol = 0.0;
  std::vector<double> threshold_value;          // T_k, k = 0..n
  std::vector<std::size_t> threshold_argmax;    // k with T_k >= max - tol
  std::size_t pi_low_end = 0;                   // Pi_low = cells [0, pi_low_end)
  std::size_t pi_high_begin = 0;                // Pi_high = cells [pi_high_begin, n)
};

double default_argmax_tol(const Grid& grid);

// Scans all n+1 threshold rules. tol < 0 selects default_argmax_tol.
MaximizerReport attention_maximizers(const Pgp& pgp, double tol = -1.0);
MaximizerReport attention_maximizers(const AttentionWeights& w, double tol = -1.0);

// Smallest and largest nu over monotone rules (attained at thresholds).
struct NuRange {
  double lo = 0.0, hi = 0.0;
};
NuRange achievable_nu(const AttentionWeights& w);

}  // namespace perception
