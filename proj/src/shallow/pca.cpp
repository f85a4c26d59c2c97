#include "bayesdl/shallow/pca.hpp"

#include <algorithm>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/linalg.hpp"

namespace bayesdl::shallow {

Matrix covariance(const Matrix& X) {
  if (X.cols() == 0) throw ShapeError("covariance of an empty sample");
  const Matrix centered = X.colwise() - X.rowwise().mean();
  return centered * centered.transpose() / static_cast<Real>(X.cols());
}

PcaModel pca_fit(const Matrix& X, Index K) {
  if (X.rows() == 0 || X.cols() == 0) throw ShapeError("pca_fit: empty data");
  if (K < 1 || K > std::min(X.rows(), X.cols()))
    throw DomainError("pca_fit: K must be in [1, min(p, n)]");
  const SymEig<Real> eig = sym_eig(covariance(X));
  PcaModel model;
  model.center = X.rowwise().mean();
  model.W = eig.vectors.leftCols(K);
  model.explained_variance = eig.values.head(K).cwiseMax(0.0);
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& X) {
  if (X.rows() != model.center.size()) throw ShapeError("pca_transform: dimension mismatch");
  return model.W.transpose() * (X.colwise() - model.center);
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& Z) {
  if (Z.rows() != model.W.cols()) throw ShapeError("pca_reconstruct: dimension mismatch");
  return (model.W * Z).colwise() + model.center;
}

Real pca_reconstruction_error(const PcaModel& model, const Matrix& X) {
  return (X - pca_reconstruct(model, pca_transform(model, X))).squaredNorm();
}

}  // namespace bayesdl::shallow
