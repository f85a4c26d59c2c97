#pragma once

#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl::shallow {

enum class FactorNorm { l1 = 1, l2 = 2 };

/// Z ≈ W F with W N x K and F K x obs.
struct FactorModel {
  Matrix weights;  // N x K
  Matrix factors;  // K x obs
  Real lambda = 0;
  FactorNorm norm = FactorNorm::l2;
  bool converged = false;
  int sweeps = 0;
  /// Objective after the initialization and after every half-step.
  std::vector<Real> objective_trace;
};

struct FactorOptions {
  int max_sweeps = 500;
  Real tolerance = 1e-8;
};

/// Σ_n ‖z_n - Σ_k w_nk f_k‖² + λ Σ |w_nk|^l
Real factor_objective(const Matrix& Z, const Matrix& W, const Matrix& F, Real lambda, FactorNorm norm);

/// Alternating minimization from a truncated-SVD start. The weight step is
/// exact ridge (l2) or lasso coordinate descent (l1); the factor step is
/// least squares.
FactorModel factor_fit(const Matrix& Z, Index K, Real lambda, FactorNorm norm,
                       const FactorOptions& options = {});

}  // namespace bayesdl::shallow
