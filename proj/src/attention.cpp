#include "perception/attention.hpp"

#include <algorithm>
#include <cmath>

#include "perception/errors.hpp"

namespace perception {

AttentionWeights::AttentionWeights(const Pgp& pgp) : grid_(pgp.grid()) {
  const std::size_t n = grid_.n();
  const double width = grid_.width();
  auto cdf = pgp.prior().cdf();
  auto cdf_i = pgp.cdf_i();
  auto f = pgp.f_i();
  auto mom = pgp.first_moment();
  w_.resize(n);
  info_.resize(n);
  bias_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double di = 0.5 * ((cdf_i[j] - cdf[j]) + (cdf_i[j + 1] - cdf[j + 1]));
    info_[j] = di * width;
    // m_j f_j - sum_i m_i mu_ij; zero off the support by construction.
    bias_[j] = grid_.midpoint(j) * f[j] - mom[j];
    w_[j] = info_[j] + bias_[j];
  }
}

double AttentionWeights::apply(std::span<const double> q) const {
  if (q.size() != w_.size()) throw Error(ErrorKind::kDimension, "rule length differs from the weights");
  double v = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) v += q[j] * w_[j];
  return v;
}

std::vector<double> AttentionWeights::threshold_values() const {
  const std::size_t n = w_.size();
  std::vector<double> t(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) t[k] = t[k + 1] + w_[k];
  return t;
}

AttentionWeights attention_weights(const Pgp& pgp) { return AttentionWeights(pgp); }

double value_of_attention(const AllocationRule& rule, const AttentionWeights& w) {
  require_same_grid(rule.grid(), w.grid(), "value_of_attention");
  return w.apply(rule.q());
}

double value_of_attention(const AllocationRule& rule, const Pgp& pgp) {
  return value_of_attention(rule, AttentionWeights(pgp));
}

double value_of_attention(const Mechanism& mech, const Pgp& pgp) {
  return attentive_utility(mech, pgp.prior()) - inattentive_utility(mech, pgp);
}

double value_of_attention_direct(const Mechanism& mech, const Pgp& pgp) {
  require_same_grid(mech.grid(), pgp.grid(), "value_of_attention_direct");
  const std::size_t n = pgp.grid().n();
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double own = mech.perceived_utility(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      const double mu = pgp.joint(i, j);
      if (mu != 0.0) v += mu * (own - mech.perceived_utility(j, i));
    }
  }
  return v;
}

double value_of_attention_direct(const AllocationRule& rule, const Pgp& pgp) {
  return value_of_attention_direct(transfers_from_envelope(rule), pgp);
}

double default_argmax_tol(const Grid& grid) { return 1e-12 * static_cast<double>(grid.n()); }

MaximizerReport attention_maximizers(const AttentionWeights& w, double tol) {
  const std::size_t n = w.grid().n();
  MaximizerReport r;
  r.tol = tol < 0.0 ? default_argmax_tol(w.grid()) : tol;
  r.threshold_value = w.threshold_values();
  // The empty (k = n) and full (k = 0) rules are constant, so nu = 0 there;
  // pin them to exactly zero rather than to the rounding residue.
  r.threshold_value[n] = 0.0;
  r.threshold_value[0] = 0.0;
  r.max_value = *std::max_element(r.threshold_value.begin(), r.threshold_value.end());
  for (std::size_t k = 0; k <= n; ++k) {
    if (r.threshold_value[k] >= r.max_value - r.tol) r.threshold_argmax.push_back(k);
  }
  r.pi_low_end = r.threshold_argmax.front();
  r.pi_high_begin = r.threshold_argmax.back();
  return r;
}

MaximizerReport attention_maximizers(const Pgp& pgp, double tol) {
  return attention_maximizers(AttentionWeights(pgp), tol);
}

NuRange achievable_nu(const AttentionWeights& w) {
  auto t = w.threshold_values();
  t.front() = 0.0;
  NuRange r;
  r.lo = *std::min_element(t.begin(), t.end());
  r.hi = *std::max_element(t.begin(), t.end());
  return r;
}

}  // namespace perception
