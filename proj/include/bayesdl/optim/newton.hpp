#pragma once

#include <vector>

#include "bayesdl/optim/optimizer.hpp"

namespace bayesdl::optim {

/// Central differences of the analytic gradient, symmetrized.
Matrix finite_difference_hessian(const GradientFn& grad, const Vector& x);

/// x + Δ with (H + λI)Δ = -g. When H + λI is not positive definite, λ is
/// escalated (x10 per attempt, starting from 1e-8 relative to |H|) up to a
/// fixed number of attempts before a ConditioningError. At most 500 parameters.
Vector newton_step(const GradientFn& grad, const Vector& x, Real damping);

struct NewtonOptions {
  int max_iterations = 100;
  Real initial_damping = 1e-3;
  Real gradient_tolerance = 1e-12;
};

struct NewtonResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
  std::vector<Real> objective_trace;
};

/// Damped Newton with adaptive λ (Levenberg-Marquardt style): λ shrinks
/// tenfold after a step that lowers f and grows tenfold after one that does not.
NewtonResult newton_minimize(const ObjectiveFn& f, const GradientFn& grad, Vector x0,
                             const NewtonOptions& options = {});

}  // namespace bayesdl::optim
