#include "perception/grid.hpp"

#include <cmath>
#include <string>

#include "perception/errors.hpp"

namespace perception {

Grid::Grid(std::size_t n) : n_(n) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidGrid, "grid needs at least 2 cells, got " + std::to_string(n));
  }
  const double dn = static_cast<double>(n);
  boundaries_.resize(n + 1);
  midpoints_.resize(n);
  for (std::size_t k = 0; k <= n; ++k) boundaries_[k] = static_cast<double>(k) / dn;
  for (std::size_t j = 0; j < n; ++j) midpoints_[j] = (static_cast<double>(j) + 0.5) / dn;
}

std::size_t Grid::cell_of(double x) const {
  if (!(x > 0.0)) return 0;
  if (x >= 1.0) return n_ - 1;
  auto k = static_cast<std::size_t>(std::floor(x * static_cast<double>(n_)));
  if (k >= n_) k = n_ - 1;
  // x*n can land one ulp on the wrong side of an exact boundary.
  if (k + 1 < n_ && boundaries_[k + 1] <= x) ++k;
  if (k > 0 && boundaries_[k] > x) --k;
  return k;
}

std::size_t Grid::nearest_boundary(double x) const {
  if (!(x > 0.0)) return 0;
  if (x >= 1.0) return n_;
  return static_cast<std::size_t>(std::lround(x * static_cast<double>(n_)));
}

Grid make_grid(std::size_t n) { return Grid(n); }

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw Error(ErrorKind::kDimension, std::string(where) + ": grid mismatch (" +
                                           std::to_string(a.n()) + " vs " + std::to_string(b.n()) + " cells)");
  }
}

}  // namespace perception
