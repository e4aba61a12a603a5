#include "perception/distribution.hpp"

#include <cmath>
#include <string>

#include "perception/errors.hpp"

namespace perception {

std::vector<double> boundary_cdf(std::span<const double> pmf) {
  std::vector<double> cdf(pmf.size() + 1, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    acc += pmf[j];
    cdf[j + 1] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

TypeDist::TypeDist(Grid grid, std::vector<double> pmf) : grid_(std::move(grid)), pmf_(std::move(pmf)) {
  if (pmf_.size() != grid_.n()) {
    throw Error(ErrorKind::kDimension, "pmf has " + std::to_string(pmf_.size()) + " entries for a " +
                                           std::to_string(grid_.n()) + "-cell grid");
  }
  double total = 0.0;
  for (double p : pmf_) {
    if (!std::isfinite(p) || p < 0.0) throw Error(ErrorKind::kInvalidDistribution, "pmf entries must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidDistribution, "pmf sums to " + std::to_string(total));
  }
  cdf_ = boundary_cdf(pmf_);
  for (std::size_t j = 0; j < pmf_.size(); ++j) mean_ += grid_.midpoint(j) * pmf_[j];
}

TypeDist uniform_prior(const Grid& grid) {
  return TypeDist(grid, std::vector<double>(grid.n(), 1.0 / static_cast<double>(grid.n())));
}

TypeDist power_prior(const Grid& grid, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::kInvalidDistribution, "power prior needs a > 0");
  std::vector<double> pmf(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) {
    pmf[j] = std::pow(grid.boundary(j + 1), a) - std::pow(grid.boundary(j), a);
  }
  return TypeDist(grid, std::move(pmf));
}

TypeDist point_prior(const Grid& grid, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::kInvalidDistribution, "point prior needs x in [0,1]");
  std::vector<double> pmf(grid.n(), 0.0);
  pmf[grid.cell_of(x)] = 1.0;
  return TypeDist(grid, std::move(pmf));
}

}  // namespace perception
