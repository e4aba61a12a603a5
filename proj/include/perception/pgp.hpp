#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "perception/distribution.hpp"
#include "perception/matrix.hpp"

namespace perception {

// Perception-generating process on a grid. kernel(i, j) is the probability of
// perceiving cell j when the type is in cell i. Derived statistics are
// computed once at construction.
class Pgp {
 public:
  Pgp(TypeDist prior, Matrix kernel, std::string label = "garble");

  const Grid& grid() const { return prior_.grid(); }
  const TypeDist& prior() const { return prior_; }
  const Matrix& kernel() const { return kernel_; }
  const std::string& label() const { return label_; }

  double joint(std::size_t i, std::size_t j) const { return prior_.pmf(i) * kernel_(i, j); }
  // f_I by perception cell and its boundary CDF.
  std::span<const double> f_i() const { return f_i_; }
  std::span<const double> cdf_i() const { return cdf_i_; }
  // sum_i m_i mu_ij, the unnormalized posterior mean.
  std::span<const double> first_moment() const { return moment_; }
  // e_I; the cell midpoint where f_I vanishes.
  std::span<const double> posterior_mean() const { return e_i_; }
  bool on_support(std::size_t j) const { return f_i_[j] > 0.0; }

 private:
  TypeDist prior_;
  Matrix kernel_;
  std::string label_;
  std::vector<double> f_i_, cdf_i_, moment_, e_i_;
};

// How a deterministic map theta -> g(theta) is put on the grid.
//   kCellImage: theta is taken uniform within cell i and each target cell
//     gets the length of its preimage inside cell i. Exact for the cell
//     masses, so F_I is right even where g is steep.
//   kMidpoint: all of cell i goes to the cell containing g(m_i).
enum class MapDiscretization { kCellImage, kMidpoint };

struct PerfectSpec {};
struct ProbWeightSpec { double alpha = 1.0; };
struct PrelecSpec { double alpha = 0.65; double beta = 1.0; };
struct ConservatismSpec { double alpha = 0.5; };
struct HypeSpec { double h = 0.0; };
struct GarbleSpec { Matrix kernel; };
struct FictitiousSpec {};

using PgpSpec = std::variant<PerfectSpec, ProbWeightSpec, PrelecSpec, ConservatismSpec,
                             HypeSpec, GarbleSpec, FictitiousSpec>;

Pgp builtin_pgp(const PgpSpec& spec, const TypeDist& prior,
                MapDiscretization disc = MapDiscretization::kCellImage);

// Kernel for a deterministic, nondecreasing map of [0,1] into itself.
Matrix deterministic_kernel(const Grid& grid, const std::function<double(double)>& g,
                            MapDiscretization disc);

bool is_unbiased(const Pgp& pgp, double tol);

}  // namespace perception
