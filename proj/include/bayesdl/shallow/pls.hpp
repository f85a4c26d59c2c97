#pragma once

#include "bayesdl/core/types.hpp"

namespace bayesdl::shallow {

/// X ≈ T Pᵀ and Y ≈ T B Cᵀ on centered data, with T the n x K score matrix.
struct PlsModel {
  Matrix T;  // n x K scores, mutually orthogonal columns
  Matrix P;  // p x K X-loadings
  Matrix B;  // K x K diagonal inner coefficients
  Matrix C;  // q x K unit response weights
  Matrix W;  // p x K unit X-weights
  Vector x_mean;
  Vector y_mean;
  Index n_components = 0;
};

/// NIPALS with deflation. X is p x n and Y is q x n (observations as columns).
PlsModel pls_fit(const Matrix& X, const Matrix& Y, Index n_components);
/// q x n predictions for new column observations.
Matrix pls_predict(const PlsModel& model, const Matrix& X);
/// Fitted training response T B Cᵀ plus the mean, as q x n.
Matrix pls_fitted(const PlsModel& model);

}  // namespace bayesdl::shallow
