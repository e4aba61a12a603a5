#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace perception {

enum class BuyerState { kAttentive, kInattentive };
// kAttentiveEquivalent: h = 0, where both states coincide (nu = 0).
enum class HypeRegime { kAttentiveEquivalent, kAttentive, kInattentiveConstrained, kInattentiveExogenous };

const char* to_string(BuyerState s);
const char* to_string(HypeRegime r);

struct HypeEquilibrium {
  double h = 0.0;
  double kappa = 0.0;
  double price = 0.5;
  BuyerState buyer_state = BuyerState::kAttentive;
  HypeRegime regime = HypeRegime::kAttentive;
  double revenue = 0.0;
  // Gross of kappa when inattentive, net when attentive.
  double buyer_utility = 0.0;
};

// p_I(h) = min{1, 1/(2(1-h))}.
double inattentive_price(double h);
// nu of a posted price p under hype h: h p^2 / 2.
double hype_value_of_attention(double h, double price);
// kappa_high(h) = h p_I(h)^2 / 2.
double kappa_high(double h);
// Root of [1 - (1-h) s] s = 1/4 with s = sqrt(2 kappa / h), by bisection.
double kappa_low(double h);

double inattentive_revenue(double h, double price);
// 1/2 - p + (1-h) p^2 / 2.
double inattentive_buyer_utility(double h, double price);

HypeEquilibrium optimal_price(double h, double kappa);

// Closed forms.
double seller_optimal_hype(double kappa);
double buyer_optimal_hype(double kappa);

struct OptimalHypeRow {
  double kappa = 0.0;
  double h_s_star = 0.0;
  double h_b_star = 0.0;
  std::optional<double> h_b_alternative;  // both optima at the knife edge
  double h_s_grid = 0.0;
  double h_b_grid = 0.0;
};

// Closed forms next to the argmax over h in {0, 1/steps, ..., 1}.
std::vector<OptimalHypeRow> optimal_hype(std::span<const double> kappas, std::size_t h_steps = 400);

struct HypeRegionRow {
  double h = 0.0;
  double kappa = 0.0;
  double kappa_low = 0.0;
  double kappa_high = 0.0;
  HypeRegime regime = HypeRegime::kAttentive;
  double price = 0.0;
  double revenue = 0.0;
  double buyer_utility = 0.0;
  int d_revenue_sign = 0;  // sign of d revenue / dh (central difference)
  int d_buyer_sign = 0;
};

std::vector<HypeRegionRow> hype_region_map(std::span<const double> h_grid, std::span<const double> kappa_grid);

// Posted price as a threshold mechanism on an n-cell grid with the Hype(h)
// PGP and uniform prior; the price is snapped to the nearest boundary.
struct HypeGridCheck {
  double price = 0.0;
  double nu_grid = 0.0;
  double nu_formula = 0.0;
  double revenue_grid = 0.0;
  double buyer_utility_grid = 0.0;
};
HypeGridCheck hype_grid_check(double h, double price, std::size_t n = 2000);

}  // namespace perception
