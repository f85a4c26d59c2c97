#include "bayesdl/bayes/ensemble.hpp"

#include <cmath>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::bayes {

Matrix ensemble_average(const std::vector<Matrix>& predictions, const Vector& weights) {
  if (predictions.empty()) throw DomainError("ensemble needs at least one predictor");
  if (static_cast<Index>(predictions.size()) != weights.size())
    throw ShapeError("one weight per predictor is required");
  if ((weights.array() < 0).any()) throw DomainError("ensemble weights must be nonnegative");
  if (std::abs(weights.sum() - 1.0) > 1e-10) throw DomainError("ensemble weights must sum to one");
  const Matrix& first = predictions.front();
  Matrix out = Matrix::Zero(first.rows(), first.cols());
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    if (predictions[k].rows() != first.rows() || predictions[k].cols() != first.cols())
      throw ShapeError("ensemble predictions have different shapes");
    out += weights[static_cast<Index>(k)] * predictions[k];
  }
  return out;
}

Matrix ensemble_average(const std::vector<Matrix>& predictions) {
  const Index k = static_cast<Index>(predictions.size());
  if (k == 0) throw DomainError("ensemble needs at least one predictor");
  return ensemble_average(predictions, Vector::Constant(k, 1.0 / static_cast<Real>(k)));
}

}  // namespace bayesdl::bayes
