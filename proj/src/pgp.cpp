#include "perception/pgp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <type_traits>

#include "perception/errors.hpp"

namespace perception {

Pgp::Pgp(TypeDist prior, Matrix kernel, std::string label)
    : prior_(std::move(prior)), kernel_(std::move(kernel)), label_(std::move(label)) {
  const std::size_t n = prior_.grid().n();
  if (kernel_.rows() != n || kernel_.cols() != n) {
    throw Error(ErrorKind::kDimension, "kernel must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double k : kernel_.row(i)) {
      if (!std::isfinite(k) || k < 0.0) {
        throw Error(ErrorKind::kKernel, "kernel row " + std::to_string(i) + " has a negative or non-finite entry");
      }
      s += k;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw Error(ErrorKind::kKernel, "kernel row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
  }

  f_i_.assign(n, 0.0);
  moment_.assign(n, 0.0);
  const Grid& g = prior_.grid();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = prior_.pmf(i);
    if (p == 0.0) continue;
    const double mp = g.midpoint(i) * p;
    auto row = kernel_.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] == 0.0) continue;
      f_i_[j] += p * row[j];
      moment_[j] += mp * row[j];
    }
  }
  cdf_i_ = boundary_cdf(f_i_);
  e_i_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    e_i_[j] = f_i_[j] > 0.0 ? std::clamp(moment_[j] / f_i_[j], 0.0, 1.0) : g.midpoint(j);
  }
}

Matrix deterministic_kernel(const Grid& grid, const std::function<double(double)>& g,
                            MapDiscretization disc) {
  const std::size_t n = grid.n();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (disc == MapDiscretization::kMidpoint) {
      k(i, grid.cell_of(g(grid.midpoint(i)))) = 1.0;
      continue;
    }
    double lo = std::clamp(g(grid.boundary(i)), 0.0, 1.0);
    double hi = std::clamp(g(grid.boundary(i + 1)), 0.0, 1.0);
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo <= 1e-15) {
      k(i, grid.cell_of(std::clamp(g(grid.midpoint(i)), 0.0, 1.0))) = 1.0;
      continue;
    }
    // Theta is uniform within the source cell, so target cell j receives the
    // length of the source cell that g sends into it. Crossing points of the
    // monotone map are found by bisection.
    const double a = grid.boundary(i), b = grid.boundary(i + 1);
    const bool rising = g(b) >= g(a);
    auto crossing = [&](double y) {
      double x0 = a, x1 = b;
      for (int it = 0; it < 100 && x1 - x0 > 1e-17; ++it) {
        const double mid = 0.5 * (x0 + x1);
        const bool below = std::clamp(g(mid), 0.0, 1.0) < y;
        if (below == rising) x0 = mid; else x1 = mid;
      }
      return 0.5 * (x0 + x1);
    };
    const std::size_t first = grid.cell_of(lo);
    const std::size_t last = grid.cell_of(hi);
    double total = 0.0;
    double prev = crossing(lo);
    for (std::size_t j = first; j <= last; ++j) {
      const double next = j == last ? crossing(hi) : crossing(grid.boundary(j + 1));
      const double len = std::abs(next - prev);
      prev = next;
      // Slivers from rounding at an image endpoint are dropped.
      if (len > 1e-10 * (b - a)) {
        k(i, j) = len;
        total += len;
      }
    }
    if (!(total > 0.0)) {
      k(i, grid.cell_of(g(grid.midpoint(i)))) = 1.0;
      continue;
    }
    for (std::size_t j = first; j <= last; ++j) k(i, j) /= total;
  }
  return k;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::kInvalidPgp, msg);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

Pgp builtin_pgp(const PgpSpec& spec, const TypeDist& prior, MapDiscretization disc) {
  const Grid& grid = prior.grid();
  const std::size_t n = grid.n();
  return std::visit(
      [&](const auto& s) -> Pgp {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PerfectSpec>) {
          Matrix k(n, n);
          for (std::size_t i = 0; i < n; ++i) k(i, i) = 1.0;
          return Pgp(prior, std::move(k), "perfect");
        } else if constexpr (std::is_same_v<T, ProbWeightSpec>) {
          require(s.alpha > 0.0 && std::isfinite(s.alpha), "prob_weight needs alpha > 0");
          const double a = s.alpha;
          return Pgp(prior, deterministic_kernel(grid, [a](double x) { return std::pow(x, a); }, disc),
                     "prob_weight:" + fmt(a));
        } else if constexpr (std::is_same_v<T, PrelecSpec>) {
          require(s.alpha > 0.0 && s.beta > 0.0 && std::isfinite(s.alpha) && std::isfinite(s.beta),
                  "prelec needs alpha > 0 and beta > 0");
          const double a = s.alpha, b = s.beta;
          auto g = [a, b](double x) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return std::exp(-b * std::pow(-std::log(x), a));
          };
          return Pgp(prior, deterministic_kernel(grid, g, disc), "prelec:" + fmt(a) + ":" + fmt(b));
        } else if constexpr (std::is_same_v<T, ConservatismSpec>) {
          require(s.alpha > 0.0 && s.alpha < 1.0, "conservatism needs alpha in (0,1)");
          const double a = s.alpha, mu = prior.mean();
          return Pgp(prior, deterministic_kernel(grid, [a, mu](double x) { return a * x + (1.0 - a) * mu; }, disc),
                     "conservatism:" + fmt(a));
        } else if constexpr (std::is_same_v<T, HypeSpec>) {
          require(s.h >= 0.0 && s.h <= 1.0, "hype needs h in [0,1]");
          Matrix k(n, n);
          for (std::size_t i = 0; i < n; ++i) {
            k(i, i) += 1.0 - s.h;
            k(i, n - 1) += s.h;
          }
          return Pgp(prior, std::move(k), "hype:" + fmt(s.h));
        } else if constexpr (std::is_same_v<T, GarbleSpec>) {
          return Pgp(prior, s.kernel, "garble");
        } else {
          Matrix k(n, n, 1.0 / static_cast<double>(n));
          return Pgp(prior, std::move(k), "fictitious");
        }
      },
      spec);
}

bool is_unbiased(const Pgp& pgp, double tol) {
  const Grid& g = pgp.grid();
  auto e = pgp.posterior_mean();
  for (std::size_t j = 0; j < g.n(); ++j) {
    if (pgp.on_support(j) && std::abs(e[j] - g.midpoint(j)) > tol) return false;
  }
  return true;
}

}  // namespace perception
