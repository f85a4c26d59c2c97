#pragma once

#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::bayes {

/// Σ_k w_k P_k. Weights must be nonnegative and sum to one within 1e-10.
Matrix ensemble_average(const std::vector<Matrix>& predictions, const Vector& weights);
/// Uniform weights 1/K.
Matrix ensemble_average(const std::vector<Matrix>& predictions);

}  // namespace bayesdl::bayes
