#pragma once

#include <vector>

#include "bayesdl/core/rng.hpp"
#include "bayesdl/core/types.hpp"
#include "bayesdl/nnet/network.hpp"

namespace bayesdl::bayes {

// p is the KEEP probability everywhere in this module: a mask entry is
// D ~ Ber(p), so p = 1 leaves the input untouched.

/// Per-layer keep probabilities for the inputs of each layer. A single
/// entry applies to every layer.
struct DropoutSpec {
  std::vector<Real> keep{1.0};

  Real keep_for(std::size_t layer) const;
};

/// D ⋆ X with a fresh i.i.d. Ber(p) mask.
Matrix apply_dropout(const Matrix& X, Real p, Rng& rng);

/// Γ = diag(X Xᵀ)^{1/2} for features stored as rows of X: Γ_jj = ||row j||.
Matrix gprior_scale(const Matrix& X);

/// Closed form of E_D ||Y - W (D ⋆ X)||² = ||Y - pWX||² + p(1-p)||WΓ||².
/// W is outputs x features, X features x observations, Y outputs x observations.
Real dropout_marginal_objective(const Matrix& W, const Matrix& X, const Matrix& Y, Real p);

struct MonteCarloEstimate {
  Real mean = 0;
  Real std_error = 0;
};

/// Monte Carlo average of ||Y - W (D ⋆ X)||² over `draws` masks.
MonteCarloEstimate dropout_mc_objective(const Matrix& W, const Matrix& X, const Matrix& Y, Real p,
                                        int draws, Rng& rng);

/// Minimizer of ||y - p wᵀX||² + p(1-p)||Γw||² from the normal equations
/// (p² X Xᵀ + p(1-p)Γ²) w = p X y, solved by Cholesky. y has one entry per observation.
Vector gprior_ridge_solve(const Matrix& X, const Vector& y, Real p);
/// Value and gradient of the same closed-form objective at w.
Real gprior_ridge_objective(const Matrix& X, const Vector& y, const Vector& w, Real p);
Vector gprior_ridge_gradient(const Matrix& X, const Vector& y, const Vector& w, Real p);

struct PredictiveMoments {
  Matrix mean;
  Matrix variance;  // unbiased sample variance, elementwise
};

/// S stochastic forward passes with masks on every layer input.
PredictiveMoments mc_dropout_predict(const nnet::Network& net, const DropoutSpec& spec,
                                     const Matrix& X, int samples, Rng& rng);

}  // namespace bayesdl::bayes
