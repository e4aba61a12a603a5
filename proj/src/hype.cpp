#include "perception/hype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perception/attention.hpp"
#include "perception/errors.hpp"
#include "perception/mechanism.hpp"
#include "perception/pgp.hpp"

namespace perception {

const char* to_string(BuyerState s) { return s == BuyerState::kAttentive ? "Attentive" : "Inattentive"; }

const char* to_string(HypeRegime r) {
  switch (r) {
    case HypeRegime::kAttentiveEquivalent: return "attentive_equivalent";
    case HypeRegime::kAttentive: return "attentive";
    case HypeRegime::kInattentiveConstrained: return "inattentive_constrained";
    case HypeRegime::kInattentiveExogenous: return "inattentive_exogenous";
  }
  return "?";
}

namespace {
void check_h(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw Error(ErrorKind::kSchema, "hype h must lie in [0,1]");
}
}  // namespace

double inattentive_price(double h) {
  check_h(h);
  if (h >= 0.5) return 1.0;
  return std::min(1.0, 1.0 / (2.0 * (1.0 - h)));
}

double hype_value_of_attention(double h, double price) { return 0.5 * h * price * price; }

double kappa_high(double h) {
  const double p = inattentive_price(h);
  return 0.5 * h * p * p;
}

double kappa_low(double h) {
  check_h(h);
  if (h == 0.0) return 0.0;
  // LHS increases in kappa on [0, kappa_high].
  auto lhs = [h](double k) {
    const double s = std::sqrt(2.0 * k / h);
    return (1.0 - (1.0 - h) * s) * s;
  };
  double lo = 0.0, hi = kappa_high(h);
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) < 0.25) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double inattentive_revenue(double h, double price) { return (h + (1.0 - h) * (1.0 - price)) * price; }

double inattentive_buyer_utility(double h, double price) {
  return 0.5 - price + 0.5 * (1.0 - h) * price * price;
}

HypeEquilibrium optimal_price(double h, double kappa) {
  check_h(h);
  if (!(kappa >= 0.0)) throw Error(ErrorKind::kSchema, "kappa must be >= 0");
  HypeEquilibrium e;
  e.h = h;
  e.kappa = kappa;
  if (h == 0.0) {
    e.price = 0.5;
    e.buyer_state = BuyerState::kInattentive;
    e.regime = HypeRegime::kAttentiveEquivalent;
    e.revenue = 0.25;
    e.buyer_utility = 0.125;
    return e;
  }
  const double k_hi = kappa_high(h);
  const double k_lo = kappa_low(h);
  if (kappa > k_hi) {
    e.price = inattentive_price(h);
    e.regime = HypeRegime::kInattentiveExogenous;
  } else if (kappa >= k_lo) {
    e.price = std::sqrt(2.0 * kappa / h);
    e.regime = HypeRegime::kInattentiveConstrained;
  } else {
    e.price = 0.5;
    e.regime = HypeRegime::kAttentive;
    e.buyer_state = BuyerState::kAttentive;
    e.revenue = 0.25;
    e.buyer_utility = 0.125 - kappa;
    return e;
  }
  e.buyer_state = BuyerState::kInattentive;
  e.revenue = inattentive_revenue(h, e.price);
  e.buyer_utility = inattentive_buyer_utility(h, e.price);
  return e;
}

double seller_optimal_hype(double kappa) { return std::min(1.0, 8.0 * kappa); }

double buyer_optimal_hype(double kappa) {
  if (kappa >= 9.0 / 128.0) return 0.0;
  if (kappa > 1.0 / 32.0) return 1.0;
  const double d = std::sqrt(2.0) - 4.0 * std::sqrt(kappa);
  return 16.0 * kappa / (d * d);
}

std::vector<OptimalHypeRow> optimal_hype(std::span<const double> kappas, std::size_t h_steps) {
  std::vector<OptimalHypeRow> rows;
  rows.reserve(kappas.size());
  for (double k : kappas) {
    OptimalHypeRow r;
    r.kappa = k;
    r.h_s_star = seller_optimal_hype(k);
    r.h_b_star = buyer_optimal_hype(k);
    if (k == 9.0 / 128.0) r.h_b_alternative = 1.0;
    double best_rev = -std::numeric_limits<double>::infinity();
    double best_buy = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= h_steps; ++s) {
      const double h = static_cast<double>(s) / static_cast<double>(h_steps);
      const HypeEquilibrium e = optimal_price(h, k);
      if (e.revenue > best_rev) {
        best_rev = e.revenue;
        r.h_s_grid = h;
      }
      if (e.buyer_utility > best_buy) {
        best_buy = e.buyer_utility;
        r.h_b_grid = h;
      }
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<HypeRegionRow> hype_region_map(std::span<const double> h_grid, std::span<const double> kappa_grid) {
  std::vector<HypeRegionRow> rows;
  rows.reserve(h_grid.size() * kappa_grid.size());
  constexpr double kStep = 1e-6;
  auto sign = [](double d) { return d > 1e-9 ? 1 : (d < -1e-9 ? -1 : 0); };
  for (double h : h_grid) {
    for (double k : kappa_grid) {
      const HypeEquilibrium e = optimal_price(h, k);
      HypeRegionRow r;
      r.h = h;
      r.kappa = k;
      r.kappa_low = kappa_low(h);
      r.kappa_high = kappa_high(h);
      r.regime = e.regime;
      r.price = e.price;
      r.revenue = e.revenue;
      r.buyer_utility = e.buyer_utility;
      const double h0 = std::max(0.0, h - kStep), h1 = std::min(1.0, h + kStep);
      const HypeEquilibrium a = optimal_price(h0, k), b = optimal_price(h1, k);
      r.d_revenue_sign = sign((b.revenue - a.revenue) / (h1 - h0));
      r.d_buyer_sign = sign((b.buyer_utility - a.buyer_utility) / (h1 - h0));
      rows.push_back(r);
    }
  }
  return rows;
}

HypeGridCheck hype_grid_check(double h, double price, std::size_t n) {
  const Grid grid(n);
  const Pgp pgp = builtin_pgp(HypeSpec{h}, uniform_prior(grid));
  const std::size_t k = grid.nearest_boundary(price);
  const double p = grid.boundary(k);
  const AllocationRule rule = AllocationRule::threshold(grid, k);
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = p * rule[j];
  const Mechanism mech(rule, std::move(t));
  HypeGridCheck c;
  c.price = p;
  c.nu_grid = value_of_attention(rule, pgp);
  c.nu_formula = hype_value_of_attention(h, p);
  auto f = pgp.f_i();
  for (std::size_t j = 0; j < n; ++j) c.revenue_grid += f[j] * mech.transfers()[j];
  c.buyer_utility_grid = inattentive_utility(mech, pgp);
  return c;
}

}  // namespace perception
