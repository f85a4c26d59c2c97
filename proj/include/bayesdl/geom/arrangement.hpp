#pragma once

#include <vector>

#include "bayesdl/core/rng.hpp"
#include "bayesdl/core/types.hpp"
#include "bayesdl/nnet/network.hpp"

namespace bayesdl::geom {

/// {x : wᵀx + b = 0}; the positive side is wᵀx + b > 0.
struct Hyperplane {
  Vector w;
  Real b = 0;
};

struct Arrangement {
  std::vector<Hyperplane> hyperplanes;
  Index dim() const { return hyperplanes.empty() ? 0 : hyperplanes.front().w.size(); }
};

enum class RegionMethod { grid, oracle };

/// Square box [lo, hi]^d sampled with `resolution` points per axis.
struct GridSpec {
  Real lo = -5;
  Real hi = 5;
  Index resolution = 2001;
};

/// Number of regions. grid: distinct sign patterns over the grid (d ≤ 3).
/// oracle: 1 + n + n(n-1)/2, valid for lines in general position in 2-D.
Index count_regions(const Arrangement& arr, RegionMethod method, const GridSpec& grid = {});

/// Throws DomainError if two lines are parallel or three are concurrent.
void require_general_position(const Arrangement& arr);

/// Region label per grid point of a 2-D arrangement, numbered in order of
/// first appearance (row-major, y outer). Row i is y = lo + i·step.
Matrix region_raster(const Arrangement& arr, const GridSpec& grid);

/// Rows of the first layer as hyperplanes.
Arrangement arrangement_from_layer(const nnet::Network& net);

/// Distinct on/off patterns of the first (ReLU) layer of a 2-D network.
Index relu_regions(const nnet::Network& net, const GridSpec& grid = {});

/// n random lines whose pairwise intersections lie inside [-box, box]² and
/// are separated from every other line by at least `min_gap`.
Arrangement random_generic_lines(Index n, Rng& rng, Real box = 3.5, Real min_gap = 0.1);

}  // namespace bayesdl::geom
