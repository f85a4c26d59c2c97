#pragma once

#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::nnet {

/// Sum of squared residuals.
Real l2_loss(const Matrix& prediction, const Matrix& target);
/// -sum Y log P for probability predictions P.
Real cross_entropy_loss(const Matrix& probabilities, const Matrix& one_hot);
/// Throws InputFormatError unless every column is a 0/1 indicator with a single 1.
void require_one_hot(const Matrix& Y);
/// One-hot matrix (classes x n) from integer labels.
Matrix one_hot_labels(const std::vector<int>& labels, Index classes);

}  // namespace bayesdl::nnet
