#include "bayesdl/nnet/loss.hpp"

#include <cmath>

#include "bayesdl/core/errors.hpp"

namespace bayesdl::nnet {

Real l2_loss(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols())
    throw ShapeError("l2_loss: shape mismatch");
  return (prediction - target).squaredNorm();
}

Real cross_entropy_loss(const Matrix& probabilities, const Matrix& one_hot) {
  if (probabilities.rows() != one_hot.rows() || probabilities.cols() != one_hot.cols())
    throw ShapeError("cross_entropy_loss: shape mismatch");
  Real total = 0;
  for (Index j = 0; j < one_hot.cols(); ++j)
    for (Index i = 0; i < one_hot.rows(); ++i)
      if (one_hot(i, j) != 0) total -= one_hot(i, j) * std::log(probabilities(i, j));
  return total;
}

void require_one_hot(const Matrix& Y) {
  for (Index j = 0; j < Y.cols(); ++j) {
    int ones = 0;
    for (Index i = 0; i < Y.rows(); ++i) {
      const Real v = Y(i, j);
      if (v == 1.0) {
        ++ones;
      } else if (v != 0.0) {
        throw InputFormatError("cross-entropy targets must be one-hot (column " +
                               std::to_string(j) + ")");
      }
    }
    if (ones != 1)
      throw InputFormatError("cross-entropy targets must be one-hot (column " +
                             std::to_string(j) + ")");
  }
}

Matrix one_hot_labels(const std::vector<int>& labels, Index classes) {
  Matrix Y = Matrix::Zero(classes, static_cast<Index>(labels.size()));
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 0 || labels[j] >= classes) throw DomainError("label out of range");
    Y(labels[j], static_cast<Index>(j)) = 1.0;
  }
  return Y;
}

}  // namespace bayesdl::nnet
