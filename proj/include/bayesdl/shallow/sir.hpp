#pragma once

#include "bayesdl/core/types.hpp"

namespace bayesdl::shallow {

struct SirModel {
  Matrix directions;  // p x k, orthonormal in the predictor-covariance metric
  Index slice_count = 0;
  Vector eigenvalues;  // k, descending
};

/// Sliced inverse regression of scalar responses y (length n) on column
/// observations X (p x n). Slices are consecutive blocks of the stable
/// sort of y with sizes differing by at most one.
SirModel sir_fit(const Matrix& X, const Vector& y, Index H, Index k);

}  // namespace bayesdl::shallow
