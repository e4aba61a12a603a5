#include <cmath>

#include "doctest.h"
#include "perception/perception.hpp"

using namespace perception;
using doctest::Approx;

TEST_CASE("inattentive price") {
  CHECK(inattentive_price(0.0) == 0.5);
  CHECK(inattentive_price(0.25) == Approx(2.0 / 3));
  CHECK(inattentive_price(0.5) == 1.0);
  CHECK(inattentive_price(0.9) == 1.0);
  CHECK(hype_value_of_attention(0.5, 0.25) == Approx(1.0 / 64));
}

TEST_CASE("thresholds") {
  for (double h : {0.1, 0.3, 0.6, 1.0}) {
    // kappa_low(h) = h / (8 (1 + sqrt h)^2).
    CHECK(kappa_low(h) == Approx(h / (8 * std::pow(1 + std::sqrt(h), 2))).epsilon(1e-10));
    CHECK(kappa_low(h) < kappa_high(h));
  }
  CHECK(kappa_high(1.0) == Approx(0.5));
}

TEST_CASE("optimal price") {
  SUBCASE("equal split at (1, 1/32)") {
    HypeEquilibrium e = optimal_price(1.0, 1.0 / 32);
    CHECK(e.price == Approx(0.25).epsilon(1e-12));
    CHECK(e.revenue == Approx(0.25).epsilon(1e-12));
    CHECK(e.buyer_utility == Approx(0.25).epsilon(1e-12));
    CHECK(e.regime == HypeRegime::kInattentiveConstrained);
  }
  SUBCASE("expensive attention: exogenous inattention") {
    const double h = 0.3, p = inattentive_price(h);
    HypeEquilibrium e = optimal_price(h, 1.0);
    CHECK(e.regime == HypeRegime::kInattentiveExogenous);
    CHECK(e.price == Approx(p));
    CHECK(e.revenue == Approx((h + (1 - h) * (1 - p)) * p));
  }
  SUBCASE("cheap attention: attentive monopoly") {
    HypeEquilibrium e = optimal_price(0.5, 0.001);
    CHECK(e.buyer_state == BuyerState::kAttentive);
    CHECK(e.price == 0.5);
    CHECK(e.revenue == 0.25);
    CHECK(e.buyer_utility == Approx(0.125 - 0.001));
  }
  SUBCASE("h = 1/2, kappa large: price one") { CHECK(optimal_price(0.5, 10.0).price == 1.0); }
  SUBCASE("h = 0") {
    HypeEquilibrium e = optimal_price(0.0, 0.3);
    CHECK(e.regime == HypeRegime::kAttentiveEquivalent);
    CHECK(e.revenue == 0.25);
  }
}

TEST_CASE("optimal hype") {
  CHECK(seller_optimal_hype(1.0 / 16) == Approx(0.5));
  CHECK(buyer_optimal_hype(1.0 / 16) == 1.0);
  CHECK(seller_optimal_hype(1.0 / 8) == 1.0);
  CHECK(buyer_optimal_hype(1.0 / 32) == Approx(1.0));
  CHECK(buyer_optimal_hype(0.08) == 0.0);
  CHECK(buyer_optimal_hype(0.01) == Approx(0.08 / std::pow(1 - std::sqrt(0.08), 2)));
  std::vector<double> ks{9.0 / 128};
  auto rows = optimal_hype(ks);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].h_b_alternative.has_value());
}

TEST_CASE("grid argmax matches the closed forms") {
  std::vector<double> ks;
  for (int i = 1; i <= 20; ++i) ks.push_back(0.01 * i);
  for (const OptimalHypeRow& r : optimal_hype(ks, 400)) {
    CHECK(std::abs(r.h_s_grid - r.h_s_star) <= 1.0 / 400 + 1e-12);
    CHECK(std::abs(r.h_b_grid - r.h_b_star) <= 1.0 / 400 + 1e-12);
  }
}

TEST_CASE("region map derivatives") {
  std::vector<double> hs{0.3}, ks{0.001, 0.02, 1.0};
  auto rows = hype_region_map(hs, ks);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].regime == HypeRegime::kAttentive);
  CHECK(rows[0].d_revenue_sign == 0);
  CHECK(rows[0].d_buyer_sign == 0);
  CHECK(rows[1].regime == HypeRegime::kInattentiveConstrained);
  CHECK(rows[1].d_buyer_sign == 1);
  CHECK(rows[2].regime == HypeRegime::kInattentiveExogenous);
  CHECK(rows[2].d_revenue_sign == 1);
  CHECK(rows[2].d_buyer_sign == -1);
}

TEST_CASE("grid mechanism consistency") {
  HypeGridCheck c = hype_grid_check(0.5, 0.25, 2000);
  CHECK(c.nu_grid == Approx(1.0 / 64).epsilon(1e-12));  // oracle: 0.015625
  CHECK(c.nu_formula == Approx(1.0 / 64));
  CHECK(c.revenue_grid == Approx(inattentive_revenue(0.5, 0.25)).epsilon(1e-9));
  CHECK(c.buyer_utility_grid == Approx(inattentive_buyer_utility(0.5, 0.25)).epsilon(1e-6));
}
