#pragma once

#include "bayesdl/core/types.hpp"

namespace bayesdl::shallow {

// Shallow learners take observations as columns, like nnet.

struct PcaModel {
  Matrix W;                   // p x K, orthonormal loading columns
  Vector center;              // p
  Vector explained_variance;  // K, descending (1/n covariance)
};

PcaModel pca_fit(const Matrix& X, Index K);
/// Z = Wᵀ(X - center)
Matrix pca_transform(const PcaModel& model, const Matrix& X);
/// X̂ = W Z + center
Matrix pca_reconstruct(const PcaModel& model, const Matrix& Z);
/// Sum of squared residuals of the rank-K reconstruction of X.
Real pca_reconstruction_error(const PcaModel& model, const Matrix& X);

/// 1/n covariance of column observations.
Matrix covariance(const Matrix& X);

}  // namespace bayesdl::shallow
