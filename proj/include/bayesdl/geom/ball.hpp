#pragma once

#include <functional>

#include "bayesdl/core/rng.hpp"
#include "bayesdl/core/types.hpp"

namespace bayesdl::geom {

struct BallSpec {
  Index dim = 1;
  Real radius = 1;
};

/// n exact uniform draws from the p-ball as columns: a normalized standard
/// normal direction times r·U^{1/p}.
Matrix ball_sample(const BallSpec& spec, Index n, Rng& rng);

/// wᵀY for every column Y of `samples`.
Vector project(const Matrix& samples, const Vector& w);

Real normal_cdf(Real x);
/// CDF of one coordinate of the uniform unit disk, density (2/π)√(1-t²).
Real disk_marginal_cdf(Real t);

/// sup_x |F_n(x) - F(x)|
Real ks_statistic(Vector sample, const std::function<Real(Real)>& cdf);

/// KS distance to N(0,1) of the first coordinate of n uniform draws from
/// the ball of radius √(p+2), which has unit marginal variance.
Real maxwell_check(Index p, Index n, Rng& rng);

}  // namespace bayesdl::geom
