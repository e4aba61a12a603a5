#pragma once

#include <span>
#include <vector>

#include "perception/grid.hpp"

namespace perception {

// Distribution of the true type over grid cells.
class TypeDist {
 public:
  // pmf must be nonnegative and sum to one within 1e-12.
  TypeDist(Grid grid, std::vector<double> pmf);

  const Grid& grid() const { return grid_; }
  std::span<const double> pmf() const { return pmf_; }
  double pmf(std::size_t j) const { return pmf_[j]; }
  // F(b_k) for k = 0..n.
  std::span<const double> cdf() const { return cdf_; }
  double cdf_at_boundary(std::size_t k) const { return cdf_[k]; }
  double mean() const { return mean_; }

 private:
  Grid grid_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
};

TypeDist uniform_prior(const Grid& grid);
// F(x) = x^a, a > 0.
TypeDist power_prior(const Grid& grid, double a);
// All mass in the cell containing x.
TypeDist point_prior(const Grid& grid, double x);

// Boundary CDF of an arbitrary cell pmf, with the last entry pinned to 1.
std::vector<double> boundary_cdf(std::span<const double> pmf);

}  // namespace perception
