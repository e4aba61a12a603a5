#include "perception/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perception/errors.hpp"

namespace perception {

Pgp partition_garbling(const TypeDist& prior, std::vector<double> cuts) {
  const Grid& g = prior.grid();
  const std::size_t n = g.n();
  std::vector<std::size_t> edges{0};
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts) {
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::kInvalidPgp, "partition cuts must lie in (0,1)");
    const std::size_t k = g.nearest_boundary(c);
    if (k > edges.back() && k < n) edges.push_back(k);
  }
  edges.push_back(n);

  Matrix k(n, n);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    double mass = 0.0, moment = 0.0;
    for (std::size_t i = edges[b]; i < edges[b + 1]; ++i) {
      mass += prior.pmf(i);
      moment += prior.pmf(i) * g.midpoint(i);
    }
    for (std::size_t i = edges[b]; i < edges[b + 1]; ++i) {
      // Massless blocks keep an identity row; they never enter any integral.
      const std::size_t target = mass > 0.0 ? g.cell_of(moment / mass) : i;
      k(i, target) = 1.0;
    }
  }
  return Pgp(prior, std::move(k), "partition");
}

Pgp binary_perception(const TypeDist& prior) {
  const std::size_t n = prior.grid().n();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, 0) = 0.5;
    k(i, n - 1) += 0.5;
  }
  return Pgp(prior, std::move(k), "binary");
}

Pgp shift_pair_coupling(const TypeDist& prior) {
  const std::size_t n = prior.grid().n();
  if (n % 4 != 0) throw Error(ErrorKind::kInvalidPgp, "shift coupling needs n divisible by 4");
  const double u = 1.0 / static_cast<double>(n);
  for (double p : prior.pmf()) {
    if (std::abs(p - u) > 1e-15) throw Error(ErrorKind::kInvalidPgp, "shift coupling needs a uniform prior");
  }
  Matrix k(n, n);
  const std::size_t q = n / 4;
  for (std::size_t i = 0; i < n; ++i) k(i, i < n / 2 ? i + q : i - q) = 1.0;
  return Pgp(prior, std::move(k), "rho_U:shift");
}

std::vector<double> uniform_band(const Grid& grid, double lo, double hi) {
  std::vector<double> f(grid.n(), 0.0);
  std::size_t count = 0;
  for (std::size_t j = 0; j < grid.n(); ++j) {
    if (grid.midpoint(j) >= lo && grid.midpoint(j) <= hi) ++count;
  }
  if (count == 0) throw Error(ErrorKind::kInvalidDistribution, "empty band");
  for (std::size_t j = 0; j < grid.n(); ++j) {
    if (grid.midpoint(j) >= lo && grid.midpoint(j) <= hi) f[j] = 1.0 / static_cast<double>(count);
  }
  return f;
}

namespace {

// Tilts one column so its mean is m, then scales it to mass t.
// Solves sum_i c_i exp(beta d_i) d_i = 0 with d_i = m_i - m by safeguarded
// Newton; the function is increasing in beta.
void project_column(std::span<double> col, std::span<const double> mid, double m, double t,
                    std::vector<double>& scratch) {
  const std::size_t n = col.size();
  bool below = false, above = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (col[i] > 0.0) {
      below |= mid[i] < m;
      above |= mid[i] > m;
    }
  }
  if (!below || !above) {
    throw InfeasibleError("martingale coupling infeasible: a perception mean lies outside its column's support", 0.0, 0.0);
  }
  scratch.resize(n);
  double beta = 0.0, lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i] > 0.0) shift = std::max(shift, beta * (mid[i] - m));
    }
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i] == 0.0) continue;
      const double d = mid[i] - m;
      const double w = col[i] * std::exp(beta * d - shift);
      scratch[i] = w;
      s0 += w;
      s1 += w * d;
      s2 += w * d * d;
    }
    const double phi = s1 / s0;
    if (phi > 0.0) hi = std::min(hi, beta); else lo = std::max(lo, beta);
    if (std::abs(phi) < 1e-16) break;
    const double var = s2 / s0 - phi * phi;
    double next = beta - phi / std::max(var, 1e-300);
    if (!(next > lo && next < hi)) {
      if (std::isfinite(lo) && std::isfinite(hi)) next = 0.5 * (lo + hi);
      else next = std::isfinite(lo) ? lo + std::max(1.0, std::abs(lo)) : hi - std::max(1.0, std::abs(hi));
    }
    if (std::abs(next - beta) <= 1e-15 * std::max(1.0, std::abs(beta))) break;
    beta = next;
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (col[i] > 0.0) shift = std::max(shift, beta * (mid[i] - m));
  }
  double s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (col[i] == 0.0) continue;
    col[i] *= std::exp(beta * (mid[i] - m) - shift);
    s0 += col[i];
  }
  const double scale = t / s0;
  for (std::size_t i = 0; i < n; ++i) col[i] *= scale;
}

}  // namespace

Pgp martingale_coupling(const TypeDist& prior, std::span<const double> target, const CouplingOptions& opts) {
  const Grid& g = prior.grid();
  const std::size_t n = g.n();
  if (target.size() != n) throw Error(ErrorKind::kDimension, "target f_I has the wrong length");
  double total = 0.0, mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(target[j] >= 0.0)) throw Error(ErrorKind::kInvalidDistribution, "target f_I must be nonnegative");
    total += target[j];
    mean += target[j] * g.midpoint(j);
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::kInvalidDistribution, "target f_I must sum to 1");
  if (std::abs(mean - prior.mean()) > 1e-9) {
    throw InfeasibleError("martingale coupling needs E_FI[pi] equal to the prior mean", 0.0, 0.0);
  }

  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < n; ++j) {
    if (target[j] > 0.0) cols.push_back(j);
  }
  // Column-major joint restricted to the target's support.
  std::vector<std::vector<double>> mu(cols.size(), std::vector<double>(n));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) mu[c][i] = prior.pmf(i) * target[cols[c]];
  }

  auto mid = g.midpoints();
  std::vector<double> scratch, rows(n);
  bool converged = false;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      project_column(mu[c], mid, mid[cols[c]], target[cols[c]], scratch);
    }
    std::fill(rows.begin(), rows.end(), 0.0);
    for (const auto& col : mu) {
      for (std::size_t i = 0; i < n; ++i) rows[i] += col[i];
    }
    for (auto& col : mu) {
      for (std::size_t i = 0; i < n; ++i) {
        if (rows[i] > 0.0) col[i] *= prior.pmf(i) / rows[i];
      }
    }
    double err = 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s0 += mu[c][i];
        s1 += mu[c][i] * (mid[i] - mid[cols[c]]);
      }
      err = std::max(err, std::abs(s0 - target[cols[c]]) + std::abs(s1));
    }
    converged = err <= opts.tol;
  }
  if (!converged) throw InfeasibleError("martingale coupling did not converge", 0.0, 0.0);

  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (prior.pmf(i) == 0.0) {
      k(i, i) = 1.0;
      continue;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c) s += mu[c][i];
    for (std::size_t c = 0; c < cols.size(); ++c) k(i, cols[c]) = mu[c][i] / s;
  }
  return Pgp(prior, std::move(k), "martingale");
}

}  // namespace perception
