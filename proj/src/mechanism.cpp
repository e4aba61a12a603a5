#include "perception/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perception/errors.hpp"

namespace perception {

AllocationRule::AllocationRule(Grid grid, std::vector<double> q) : grid_(std::move(grid)), q_(std::move(q)) {
  if (q_.size() != grid_.n()) throw Error(ErrorKind::kDimension, "rule length differs from the grid");
  for (std::size_t j = 0; j < q_.size(); ++j) {
    if (!(q_[j] >= -1e-12 && q_[j] <= 1.0 + 1e-12)) {
      throw Error(ErrorKind::kIcViolation, "allocation outside [0,1] at cell " + std::to_string(j));
    }
    q_[j] = std::clamp(q_[j], 0.0, 1.0);
    if (j > 0 && q_[j] < q_[j - 1] - 1e-12) {
      throw Error(ErrorKind::kIcViolation, "allocation decreases at cell " + std::to_string(j));
    }
    // Round-off dips are lifted so that q is exactly nondecreasing.
    if (j > 0) q_[j] = std::max(q_[j], q_[j - 1]);
  }
}

AllocationRule AllocationRule::threshold(const Grid& grid, std::size_t k) {
  std::vector<double> q(grid.n(), 0.0);
  for (std::size_t j = std::min(k, grid.n()); j < grid.n(); ++j) q[j] = 1.0;
  return AllocationRule(grid, std::move(q));
}

AllocationRule AllocationRule::constant(const Grid& grid, double c) {
  return AllocationRule(grid, std::vector<double>(grid.n(), c));
}

AllocationRule AllocationRule::from_function(const Grid& grid, const std::function<double(double)>& f) {
  std::vector<double> q(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) q[j] = std::clamp(f(grid.midpoint(j)), 0.0, 1.0);
  return AllocationRule(grid, std::move(q));
}

Mechanism::Mechanism(AllocationRule rule, std::vector<double> transfers)
    : rule_(std::move(rule)), t_(std::move(transfers)) {
  if (t_.size() != rule_.size()) throw Error(ErrorKind::kDimension, "transfer length differs from the rule");
  // With q nondecreasing, adjacent deviations telescope into any longer one,
  // so the summed local slack bounds the global violation. Only when that
  // bound trips do we pay for the exact n^2 scan.
  double bound = 0.0;
  for (std::size_t j = 0; j + 1 < t_.size(); ++j) {
    bound += std::max(0.0, perceived_utility(j + 1, j) - perceived_utility(j, j));
    bound += std::max(0.0, perceived_utility(j, j + 1) - perceived_utility(j + 1, j + 1));
  }
  const double v = bound > 1e-9 ? ic_violation() : bound;
  if (v > 1e-9) throw Error(ErrorKind::kIcViolation, "mechanism violates IC by " + std::to_string(v));
}

double Mechanism::ic_violation() const {
  const std::size_t n = t_.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double own = perceived_utility(j, j);
    for (std::size_t r = 0; r < n; ++r) worst = std::max(worst, perceived_utility(r, j) - own);
  }
  return worst;
}

Mechanism transfers_from_envelope(const AllocationRule& rule, double outside_utility) {
  const Grid& g = rule.grid();
  const double w = g.width();
  std::vector<double> t(g.n());
  double below = 0.0;  // sum_{k<j} q_k / n
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double m = g.midpoint(j);
    t[j] = m * rule[j] - (below + rule[j] * (m - g.boundary(j))) - outside_utility;
    below += rule[j] * w;
  }
  return Mechanism(rule, std::move(t));
}

double attentive_utility(const Mechanism& mech, const TypeDist& prior) {
  require_same_grid(mech.grid(), prior.grid(), "attentive_utility");
  double v = 0.0;
  for (std::size_t j = 0; j < prior.grid().n(); ++j) v += prior.pmf(j) * mech.perceived_utility(j, j);
  return v;
}

double inattentive_utility(const Mechanism& mech, const Pgp& pgp) {
  require_same_grid(mech.grid(), pgp.grid(), "inattentive_utility");
  auto mom = pgp.first_moment();
  auto f = pgp.f_i();
  auto t = mech.transfers();
  double v = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) v += mom[j] * mech.rule()[j] - f[j] * t[j];
  return v;
}

double inattentive_utility_direct(const Mechanism& mech, const Pgp& pgp) {
  require_same_grid(mech.grid(), pgp.grid(), "inattentive_utility_direct");
  const std::size_t n = pgp.grid().n();
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double mu = pgp.joint(i, j);
      if (mu != 0.0) v += mu * mech.perceived_utility(j, i);
    }
  }
  return v;
}

double expected_profit(const Mechanism& mech, std::span<const double> report_pmf,
                       const std::function<double(double)>& cost) {
  if (report_pmf.size() != mech.rule().size()) throw Error(ErrorKind::kDimension, "report pmf length");
  double v = 0.0;
  auto t = mech.transfers();
  for (std::size_t j = 0; j < report_pmf.size(); ++j) {
    if (report_pmf[j] != 0.0) v += report_pmf[j] * (t[j] - cost(mech.rule()[j]));
  }
  return v;
}

}  // namespace perception
