#pragma once

#include <span>
#include <vector>

#include "perception/pgp.hpp"

namespace perception {

// Pools each block between consecutive cut points and reports it at the cell
// containing the block's mean. Cuts are snapped to grid boundaries. The
// result is exactly unbiased when every block mean is a cell midpoint (for a
// uniform prior: every block has an odd number of cells).
Pgp partition_garbling(const TypeDist& prior, std::vector<double> cuts);

// Every type is perceived as 0 or 1 with probability one half each.
Pgp binary_perception(const TypeDist& prior);

// Unbiased PGP with F uniform on [0,1] and F_I uniform on [1/4,3/4]:
// theta < 1/2 is perceived as theta + 1/4, the rest as theta - 1/4. Every
// perception has two equally likely sources symmetric around it, so
// e_I(pi) = pi exactly. Needs a uniform prior and n divisible by 4.
Pgp shift_pair_coupling(const TypeDist& prior);

struct CouplingOptions {
  int max_sweeps = 500;
  double tol = 1e-13;
};

// Entropic martingale coupling: the joint law closest (in KL) to prior x
// target with row sums = prior, column sums = target and column means equal
// to the perception midpoints. Alternating Bregman projections. Throws
// InfeasibleError if the target is not a mean-preserving contraction of
// the prior or the sweeps do not converge.
Pgp martingale_coupling(const TypeDist& prior, std::span<const double> target_f_i,
                        const CouplingOptions& opts = {});

// Uniform f_I over the cells whose midpoints lie in [lo, hi].
std::vector<double> uniform_band(const Grid& grid, double lo, double hi);

}  // namespace perception
