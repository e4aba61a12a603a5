#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace perception {

// Uniform partition of [0,1] into n cells.
class Grid {
 public:
  explicit Grid(std::size_t n);

  std::size_t n() const { return n_; }
  double width() const { return 1.0 / static_cast<double>(n_); }
  double boundary(std::size_t k) const { return boundaries_[k]; }
  double midpoint(std::size_t j) const { return midpoints_[j]; }
  std::span<const double> boundaries() const { return boundaries_; }
  std::span<const double> midpoints() const { return midpoints_; }

  // Cell containing x; a point on a boundary belongs to the upper cell and
  // x = 1 belongs to the last cell.
  std::size_t cell_of(double x) const;

  // Nearest boundary index to x.
  std::size_t nearest_boundary(double x) const;

  bool operator==(const Grid& o) const { return n_ == o.n_; }

 private:
  std::size_t n_;
  std::vector<double> boundaries_;
  std::vector<double> midpoints_;
};

Grid make_grid(std::size_t n);

// Throws a dimension error when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace perception
