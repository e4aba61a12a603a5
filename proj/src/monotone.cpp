#include "perception/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perception/errors.hpp"

namespace perception {

SeparableObjective::SeparableObjective(Grid grid, std::vector<double> linear, std::vector<double> mass,
                                       CostFunction cost)
    : grid_(std::move(grid)), linear_(std::move(linear)), mass_(std::move(mass)), cost_(std::move(cost)) {
  if (linear_.size() != grid_.n() || mass_.size() != grid_.n()) {
    throw Error(ErrorKind::kDimension, "objective coefficients differ in length from the grid");
  }
  for (double m : mass_) {
    if (!(m >= 0.0)) throw Error(ErrorKind::kSchema, "objective cost weights must be >= 0");
  }
}

double SeparableObjective::value(std::span<const double> q) const {
  if (q.size() != linear_.size()) throw Error(ErrorKind::kDimension, "rule length differs from the objective");
  double v = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) v += cell_value(j, q[j]);
  return v;
}

SeparableObjective SeparableObjective::tilted(std::span<const double> w, double lambda) const {
  if (w.size() != linear_.size()) throw Error(ErrorKind::kDimension, "tilt length differs from the objective");
  std::vector<double> a(linear_);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += lambda * w[j];
  return SeparableObjective(grid_, std::move(a), mass_, cost_);
}

SeparableObjective attentive_welfare_objective(const TypeDist& prior, const CostFunction& cost) {
  const Grid& g = prior.grid();
  std::vector<double> a(g.n());
  for (std::size_t j = 0; j < g.n(); ++j) a[j] = g.midpoint(j) * prior.pmf(j);
  return SeparableObjective(g, std::move(a), {prior.pmf().begin(), prior.pmf().end()}, cost);
}

SeparableObjective inattentive_welfare_objective(const Pgp& pgp, const CostFunction& cost) {
  return SeparableObjective(pgp.grid(), {pgp.first_moment().begin(), pgp.first_moment().end()},
                            {pgp.f_i().begin(), pgp.f_i().end()}, cost);
}

SeparableObjective revenue_objective(const Grid& grid, std::span<const double> report_pmf,
                                     const CostFunction& cost) {
  if (report_pmf.size() != grid.n()) throw Error(ErrorKind::kDimension, "report pmf length");
  auto cdf = boundary_cdf(report_pmf);
  std::vector<double> a(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) {
    a[j] = grid.midpoint(j) * report_pmf[j] - (1.0 - 0.5 * (cdf[j] + cdf[j + 1])) * grid.width();
  }
  return SeparableObjective(grid, std::move(a), {report_pmf.begin(), report_pmf.end()}, cost);
}

SeparableObjective attention_objective(const AttentionWeights& w) {
  return SeparableObjective(w.grid(), {w.w().begin(), w.w().end()}, std::vector<double>(w.grid().n(), 0.0),
                            CostFunction::linear(0.0));
}

namespace {

// PAV on block sums: the pooled value of a block is sum(a)/sum(wt).
std::vector<double> pav_sums(std::span<const double> a, std::span<const double> wt) {
  struct Block {
    double a, w;
    std::size_t len;
    double value() const { return a / w; }
  };
  std::vector<Block> st;
  st.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    Block b{a[j], wt[j], 1};
    while (!st.empty() && st.back().value() > b.value()) {
      b.a += st.back().a;
      b.w += st.back().w;
      b.len += st.back().len;
      st.pop_back();
    }
    st.push_back(b);
  }
  std::vector<double> x;
  x.reserve(a.size());
  for (const auto& b : st) x.insert(x.end(), b.len, b.value());
  return x;
}

// Linear payoff: the best monotone rule is the threshold with the largest
// suffix sum; ties go to the later cutoff (less allocation).
std::vector<double> best_threshold(std::span<const double> slope) {
  const std::size_t n = slope.size();
  double best = 0.0, acc = 0.0;
  std::size_t best_k = n;
  for (std::size_t k = n; k-- > 0;) {
    acc += slope[k];
    if (acc > best) {
      best = acc;
      best_k = k;
    }
  }
  std::vector<double> q(n, 0.0);
  for (std::size_t j = best_k; j < n; ++j) q[j] = 1.0;
  return q;
}

std::vector<double> monotone_dp(const SeparableObjective& obj, std::size_t levels) {
  const std::size_t n = obj.grid().n();
  const std::size_t L = std::max<std::size_t>(levels, 2);
  std::vector<double> x(L), c(L);
  for (std::size_t l = 0; l < L; ++l) {
    x[l] = static_cast<double>(l) / static_cast<double>(L - 1);
    c[l] = obj.cost()(x[l]);
  }
  // best[j][l]: value of cells 0..j with q_j at level l; arg keeps the
  // argmax level of cell j-1 (prefix max, smallest level on ties).
  std::vector<double> prev(L), cur(L);
  std::vector<std::size_t> arg(n * L, 0);
  for (std::size_t l = 0; l < L; ++l) prev[l] = obj.linear()[0] * x[l] - obj.mass()[0] * c[l];
  for (std::size_t j = 1; j < n; ++j) {
    double run = -std::numeric_limits<double>::infinity();
    std::size_t run_arg = 0;
    for (std::size_t l = 0; l < L; ++l) {
      if (prev[l] > run) {
        run = prev[l];
        run_arg = l;
      }
      cur[l] = run + obj.linear()[j] * x[l] - obj.mass()[j] * c[l];
      arg[j * L + l] = run_arg;
    }
    std::swap(prev, cur);
  }
  std::size_t l = static_cast<std::size_t>(std::max_element(prev.begin(), prev.end()) - prev.begin());
  std::vector<double> q(n);
  for (std::size_t j = n; j-- > 0;) {
    q[j] = x[l];
    if (j > 0) l = arg[j * L + l];
  }
  return q;
}

}  // namespace

std::vector<double> weighted_pav(std::span<const double> y, std::span<const double> weight) {
  if (y.size() != weight.size()) throw Error(ErrorKind::kDimension, "pav: length mismatch");
  std::vector<double> a(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!(weight[j] > 0.0)) throw Error(ErrorKind::kSchema, "pav weights must be > 0");
    a[j] = weight[j] * y[j];
  }
  return pav_sums(a, weight);
}

AllocationRule maximize_monotone(const SeparableObjective& obj, const MonotoneOptions& opts) {
  const std::size_t n = obj.grid().n();
  const CostFunction& cost = obj.cost();
  switch (cost.kind()) {
    case CostKind::kLinear: {
      std::vector<double> slope(n);
      for (std::size_t j = 0; j < n; ++j) slope[j] = obj.linear()[j] - obj.mass()[j] * cost.slope();
      return AllocationRule(obj.grid(), best_threshold(slope));
    }
    case CostKind::kQuadratic: {
      const double top = *std::max_element(obj.mass().begin(), obj.mass().end());
      if (!(top > 0.0)) return AllocationRule(obj.grid(), best_threshold(obj.linear()));
      // Cells without curvature get a vanishing quadratic so the pooled
      // block optimum sum(a)/sum(mass) stays defined; their own target
      // a/eps then saturates at 0 or 1 as the linear payoff dictates.
      const double eps = 1e-14 * top;
      std::vector<double> wt(n);
      for (std::size_t j = 0; j < n; ++j) wt[j] = obj.mass()[j] + eps;
      auto x = pav_sums(obj.linear(), wt);
      for (double& v : x) v = std::clamp(v, 0.0, 1.0);
      return AllocationRule(obj.grid(), std::move(x));
    }
    case CostKind::kTabulated:
      return AllocationRule(obj.grid(), monotone_dp(obj, opts.levels));
  }
  throw Error(ErrorKind::kSchema, "unknown cost kind");
}

ConstrainedSolution maximize_with_attention_constraint(const SeparableObjective& obj, const AttentionWeights& w,
                                                       double kappa, const ConstraintOptions& opts) {
  require_same_grid(obj.grid(), w.grid(), "maximize_with_attention_constraint");
  const MonotoneOptions mopts{opts.levels};
  struct Point {
    double lambda;
    AllocationRule rule;
    double nu;
  };
  auto solve = [&](double lambda) {
    AllocationRule r = maximize_monotone(obj.tilted(w.w(), lambda), mopts);
    const double nu = w.apply(r.q());
    return Point{lambda, std::move(r), nu};
  };
  auto finish = [&](const AllocationRule& r, double lambda, bool mixed) {
    ConstrainedSolution s{r, lambda, w.apply(r.q()), obj.value(r.q()), false, mixed};
    s.converged = std::abs(s.nu - kappa) <= opts.band;
    return s;
  };

  Point p0 = solve(0.0);
  if (std::abs(p0.nu - kappa) <= opts.band) return finish(p0.rule, 0.0, false);

  const NuRange range = achievable_nu(w);
  if (kappa < range.lo - opts.band || kappa > range.hi + opts.band) {
    throw InfeasibleError("attention target " + std::to_string(kappa) + " outside achievable range [" +
                              std::to_string(range.lo) + ", " + std::to_string(range.hi) + "]",
                          range.lo, range.hi);
  }

  // nu(q(lambda)) is nondecreasing in lambda (revealed preference between two
  // tilts), so bracket then bisect.
  const double dir = p0.nu < kappa ? 1.0 : -1.0;
  Point near = std::move(p0);
  Point far = solve(dir);
  while ((far.nu - kappa) * dir < 0.0 && std::abs(far.lambda) < 1e15) {
    near = std::move(far);
    far = solve(near.lambda * 2.0);
  }
  if ((far.nu - kappa) * dir < 0.0) {
    // Target sits at the edge of the range and the tilt cannot reach it.
    return finish(far.rule, far.lambda, false);
  }
  Point lo = dir > 0 ? std::move(near) : std::move(far);  // nu below kappa
  Point hi = dir > 0 ? std::move(far) : std::move(near);  // nu above kappa
  for (int it = 0; it < opts.max_bisection; ++it) {
    const double mid = 0.5 * (lo.lambda + hi.lambda);
    if (mid == lo.lambda || mid == hi.lambda) break;
    Point p = solve(mid);
    if (std::abs(p.nu - kappa) <= 1e-13) return finish(p.rule, p.lambda, false);
    if (p.nu < kappa) lo = std::move(p); else hi = std::move(p);
    if (std::abs(hi.lambda - lo.lambda) <= 1e-14 * std::max(1.0, std::abs(lo.lambda))) break;
  }
  // nu jumps across kappa at this multiplier (linear pieces). Both ends are
  // Lagrangian optimal for the same tilt, so their mix is optimal too.
  const double alpha = hi.nu > lo.nu ? (kappa - lo.nu) / (hi.nu - lo.nu) : 0.0;
  std::vector<double> q(lo.rule.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = (1.0 - alpha) * lo.rule[j] + alpha * hi.rule[j];
  return finish(AllocationRule(obj.grid(), std::move(q)), 0.5 * (lo.lambda + hi.lambda), true);
}

AllocationRule brute_force_monotone(const SeparableObjective& obj, std::size_t levels,
                                    const std::optional<BruteForceConstraint>& constraint) {
  const std::size_t n = obj.grid().n();
  if (n > 14 || levels > 6 || levels < 2) {
    throw Error(ErrorKind::kSizeLimit, "brute force limited to n <= 14 cells and 2..6 levels (got n=" +
                                           std::to_string(n) + ", M=" + std::to_string(levels) + ")");
  }
  if (constraint && constraint->weights.size() != n) throw Error(ErrorKind::kDimension, "constraint weights length");
  std::vector<double> x(levels), q(n), best_q;
  for (std::size_t l = 0; l < levels; ++l) x[l] = static_cast<double>(l) / static_cast<double>(levels - 1);
  double best = -std::numeric_limits<double>::infinity();

  auto recurse = [&](auto&& self, std::size_t j, std::size_t min_level, double value, double nu) -> void {
    if (j == n) {
      if (constraint && std::abs(nu - constraint->kappa) > constraint->band) return;
      if (value > best) {
        best = value;
        best_q = q;
      }
      return;
    }
    for (std::size_t l = min_level; l < levels; ++l) {
      q[j] = x[l];
      const double dn = constraint ? constraint->weights[j] * x[l] : 0.0;
      self(self, j + 1, l, value + obj.cell_value(j, x[l]), nu + dn);
    }
  };
  recurse(recurse, 0, 0, 0.0, 0.0);
  if (best_q.empty()) throw InfeasibleError("no level-valued monotone rule meets the constraint", 0.0, 0.0);
  return AllocationRule(obj.grid(), std::move(best_q));
}

}  // namespace perception
