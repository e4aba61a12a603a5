#include "perception/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perception/errors.hpp"

namespace perception {

SCurve::SCurve(const Pgp& pgp) : grid_(pgp.grid()) {
  const std::size_t n = grid_.n();
  auto cdf_i = pgp.cdf_i();
  auto f = pgp.f_i();
  auto mom = pgp.first_moment();
  s_.assign(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    const double tail = 0.5 * (cdf_i[j] + cdf_i[j + 1]) * grid_.width();
    s_[j] = s_[j + 1] + tail + (grid_.midpoint(j) * f[j] - mom[j]);
  }
}

SCurve s_statistic(const Pgp& pgp) { return SCurve(pgp); }

std::vector<double> prior_tail_integral(const TypeDist& prior) {
  const std::size_t n = prior.grid().n();
  auto cdf = prior.cdf();
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) out[j] = out[j + 1] + 0.5 * (cdf[j] + cdf[j + 1]) * prior.grid().width();
  return out;
}

const char* to_string(AccuracyOrder o) {
  switch (o) {
    case AccuracyOrder::kAMore: return "a_more";
    case AccuracyOrder::kBMore: return "b_more";
    case AccuracyOrder::kEqual: return "equal";
    case AccuracyOrder::kIncomparable: return "incomparable";
  }
  return "?";
}

double default_accuracy_tol(const Grid& grid) {
  return 1e-6 * (1.0 + static_cast<double>(grid.n()) / 1000.0);
}

AccuracyOrder is_more_accurate(const Pgp& a, const Pgp& b, double tol) {
  require_same_grid(a.grid(), b.grid(), "is_more_accurate");
  auto pa = a.prior().pmf();
  auto pb = b.prior().pmf();
  for (std::size_t j = 0; j < pa.size(); ++j) {
    if (std::abs(pa[j] - pb[j]) > 1e-12) {
      throw Error(ErrorKind::kInvalidComparison, "accuracy comparison needs a common prior");
    }
  }
  if (tol < 0.0) tol = default_accuracy_tol(a.grid());
  SCurve sa(a), sb(b);
  double lo = 0.0, hi = 0.0;  // extremes of S_a - S_b
  for (std::size_t k = 0; k < sa.s().size(); ++k) {
    const double d = sa.at(k) - sb.at(k);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const bool a_not_above = hi <= tol;
  const bool b_not_above = lo >= -tol;
  if (a_not_above && b_not_above) return AccuracyOrder::kEqual;
  if (a_not_above) return AccuracyOrder::kAMore;
  if (b_not_above) return AccuracyOrder::kBMore;
  return AccuracyOrder::kIncomparable;
}

double agent_welfare(const Mechanism& mech, double kappa, const Pgp& pgp) {
  if (!(kappa >= 0.0)) throw Error(ErrorKind::kSchema, "kappa must be >= 0");
  const double vi = inattentive_utility(mech, pgp);
  if (std::isinf(kappa)) return vi;
  return std::max(attentive_utility(mech, pgp.prior()) - kappa, vi);
}

}  // namespace perception
